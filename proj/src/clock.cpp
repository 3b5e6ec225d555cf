#include "reflekt/clock.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace reflekt {

std::pair<int, int> clock_invariant(const CycleOrientation& q) {
  int fwd = 0;
  for (int x : q.o)
    if (x > 0) ++fwd;
  int bwd = q.n() - fwd;
  return {std::min(fwd, bwd), std::max(fwd, bwd)};
}

// arrows at vertex v: o[v-1] (from v-1) and o[v] (to v+1)
bool is_source(const CycleOrientation& q, int v) {
  int n = q.n();
  if (n < 2) return false;
  int prev = q.o[(v + n - 1) % n];
  int next = q.o[v];
  return prev == -1 && next == +1;
}

bool is_sink(const CycleOrientation& q, int v) {
  int n = q.n();
  if (n < 2) return false;
  int prev = q.o[(v + n - 1) % n];
  int next = q.o[v];
  return prev == +1 && next == -1;
}

std::optional<CycleOrientation> reflect_cycle(const CycleOrientation& q, int v) {
  if (!is_source(q, v) && !is_sink(q, v)) return std::nullopt;
  CycleOrientation r = q;
  int n = q.n();
  r.o[(v + n - 1) % n] *= -1;
  r.o[v] *= -1;
  return r;
}

CycleOrientation canonical_cycle(const CycleOrientation& q) {
  int n = q.n();
  CycleOrientation best = q;
  for (int rot = 0; rot < n; ++rot) {
    CycleOrientation cand;
    cand.o.resize(n);
    for (int i = 0; i < n; ++i) cand.o[i] = q.o[(i + rot) % n];
    if (cand < best) best = cand;
    // reversing the cycle: arrow i of the reversed cycle is arrow n-1-i
    // traversed backwards
    CycleOrientation rev;
    rev.o.resize(n);
    for (int i = 0; i < n; ++i) rev.o[i] = -cand.o[(n - 1 - i + n) % n];
    if (rev < best) best = rev;
  }
  return best;
}

CycleOrientation normal_form_cycle(int p, int q) {
  CycleOrientation r;
  for (int i = 0; i < p; ++i) r.o.push_back(+1);
  for (int i = 0; i < q; ++i) r.o.push_back(-1);
  return r;
}

std::vector<CycleOrientation> reflection_component(const CycleOrientation& q) {
  std::set<CycleOrientation> seen;
  std::deque<CycleOrientation> queue;
  auto push = [&](const CycleOrientation& c) {
    CycleOrientation canon = canonical_cycle(c);
    if (seen.insert(canon).second) queue.push_back(canon);
  };
  push(q);
  while (!queue.empty()) {
    CycleOrientation cur = queue.front();
    queue.pop_front();
    for (int v = 0; v < cur.n(); ++v)
      if (auto r = reflect_cycle(cur, v)) push(*r);
  }
  return {seen.begin(), seen.end()};
}

ClockCheck check_clock_condition(int n) {
  ClockCheck out;
  std::vector<CycleOrientation> all;
  for (int mask = 0; mask < (1 << n); ++mask) {
    CycleOrientation q;
    for (int i = 0; i < n; ++i) q.o.push_back((mask >> i) & 1 ? +1 : -1);
    all.push_back(q);
  }
  for (auto& q : all)
    for (int v = 0; v < n; ++v)
      if (auto r = reflect_cycle(q, v))
        if (clock_invariant(*r) != clock_invariant(q)) out.reflections_preserve_invariant = false;

  // group canonical components and compare against the invariant classes
  std::map<CycleOrientation, int> comp_id;
  int next_id = 0;
  for (auto& q : all) {
    CycleOrientation c = canonical_cycle(q);
    if (comp_id.count(c)) continue;
    auto comp = reflection_component(q);
    for (auto& x : comp) comp_id[x] = next_id;
    ++next_id;
  }
  for (auto& q1 : all)
    for (auto& q2 : all) {
      if (clock_invariant(q1) != clock_invariant(q2)) continue;
      if (comp_id.at(canonical_cycle(q1)) != comp_id.at(canonical_cycle(q2)))
        out.equal_invariant_connected = false;
    }
  for (auto& q : all) {
    auto [p, qq] = clock_invariant(q);
    CycleOrientation nf = canonical_cycle(normal_form_cycle(qq, p));
    // the invariant is unordered; the normal form uses either split
    CycleOrientation nf2 = canonical_cycle(normal_form_cycle(p, qq));
    auto comp = reflection_component(q);
    bool found = false;
    for (auto& x : comp)
      if (x == nf || x == nf2) found = true;
    if (!found) out.reaches_normal_form = false;
  }
  return out;
}

}  // namespace reflekt
