#include "reflekt/catcore.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>

namespace reflekt {

// ---------------------------------------------------------------- Quiver

int Quiver::vertex_index(const std::string& v) const {
  for (size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == v) return static_cast<int>(i);
  return -1;
}

int Quiver::arrow_index(const std::string& a) const {
  for (size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].name == a) return static_cast<int>(i);
  return -1;
}

std::string Quiver::validate() const {
  std::set<std::string> vs(vertices.begin(), vertices.end());
  if (vs.size() != vertices.size()) return "duplicate vertex id";
  std::set<std::string> as;
  for (auto& a : arrows) {
    if (!as.insert(a.name).second) return "duplicate arrow id '" + a.name + "'";
    if (a.src < 0 || a.src >= static_cast<int>(vertices.size()) || a.tgt < 0 ||
        a.tgt >= static_cast<int>(vertices.size()))
      return "arrow '" + a.name + "' has endpoint outside the vertex set";
  }
  return "";
}

static std::string validate_path(const Quiver& q, const QPath& p) {
  int at = p.src;
  if (at < 0 || at >= static_cast<int>(q.vertices.size())) return "path source missing";
  for (int a : p.arrows) {
    if (a < 0 || a >= static_cast<int>(q.arrows.size())) return "path uses unknown arrow";
    if (q.arrows[a].src != at) return "path not composable at arrow '" + q.arrows[a].name + "'";
    at = q.arrows[a].tgt;
  }
  if (at != p.tgt) return "path target mismatch";
  return "";
}

std::string PresentedCategory::validate() const {
  if (auto e = quiver.validate(); !e.empty()) return e;
  for (auto& [l, r] : relations) {
    if (auto e = validate_path(quiver, l); !e.empty()) return e;
    if (auto e = validate_path(quiver, r); !e.empty()) return e;
    if (l.src != r.src || l.tgt != r.tgt) return "relation sides are not parallel";
  }
  return "";
}

PresentedCategory free_category(const Quiver& q) {
  if (auto e = q.validate(); !e.empty()) throw std::invalid_argument("free_category: " + e);
  return PresentedCategory{q, {}};
}

// ---------------------------------------------------------------- FinCategory

int FinCategory::object_index(const std::string& o) const {
  auto it = obj_by_name_.find(o);
  return it == obj_by_name_.end() ? -1 : it->second;
}

int FinCategory::mor_index(const std::string& m) const {
  auto it = mor_by_name_.find(m);
  return it == mor_by_name_.end() ? -1 : it->second;
}

int FinCategory::compose(int g, int f) const {
  auto it = comp_.find(key(g, f));
  return it == comp_.end() ? -1 : it->second;
}

int FinCategory::compose_path(const std::vector<int>& diagrammatic, int obj_if_empty) const {
  if (diagrammatic.empty()) return identity[obj_if_empty];
  int acc = diagrammatic[0];
  for (size_t i = 1; i < diagrammatic.size(); ++i) {
    acc = compose(diagrammatic[i], acc);
    if (acc < 0) throw std::invalid_argument("compose_path: not composable");
  }
  return acc;
}

const std::vector<int>& FinCategory::hom(int a, int b) const {
  return hom_[static_cast<size_t>(a) * objects.size() + b];
}

std::optional<int> FinCategory::inverse_of(int m) const {
  int a = mors[m].src, b = mors[m].tgt;
  for (int g : hom(b, a))
    if (compose(g, m) == identity[a] && compose(m, g) == identity[b]) return g;
  return std::nullopt;
}

bool FinCategory::is_iso(int m) const { return inverse_of(m).has_value(); }

bool FinCategory::isomorphic_objects(int a, int b) const {
  if (a == b) return true;
  for (int m : hom(a, b))
    if (is_iso(m)) return true;
  return false;
}

void FinCategory::set_composite(int g, int f, int gf) { comp_[key(g, f)] = gf; }

void FinCategory::finalize() {
  obj_by_name_.clear();
  mor_by_name_.clear();
  for (size_t i = 0; i < objects.size(); ++i) {
    if (!obj_by_name_.emplace(objects[i], static_cast<int>(i)).second)
      throw std::invalid_argument("category '" + name + "': duplicate object '" + objects[i] + "'");
  }
  for (size_t i = 0; i < mors.size(); ++i) {
    if (!mor_by_name_.emplace(mors[i].name, static_cast<int>(i)).second)
      throw std::invalid_argument("category '" + name + "': duplicate morphism '" + mors[i].name + "'");
  }
  hom_.assign(objects.size() * objects.size(), {});
  for (size_t i = 0; i < mors.size(); ++i)
    hom_[static_cast<size_t>(mors[i].src) * objects.size() + mors[i].tgt].push_back(static_cast<int>(i));

  if (generators.empty()) {
    for (size_t i = 0; i < mors.size(); ++i)
      if (!is_identity(static_cast<int>(i))) generators.push_back(static_cast<int>(i));
  }
  // witnesses by BFS from identities: every morphism = generator ∘ (shorter)
  witness.assign(mors.size(), {});
  std::vector<char> reached(mors.size(), 0);
  std::deque<int> queue;
  for (int id : identity) {
    reached[id] = 1;
    queue.push_back(id);
  }
  while (!queue.empty()) {
    int m = queue.front();
    queue.pop_front();
    for (int g : generators) {
      if (mors[g].src != mors[m].tgt) continue;
      int gm = compose(g, m);
      if (gm < 0) throw std::invalid_argument("category '" + name + "': missing composite in table");
      if (!reached[gm]) {
        reached[gm] = 1;
        witness[gm] = witness[m];
        witness[gm].push_back(g);
        queue.push_back(gm);
      }
    }
  }
  for (size_t i = 0; i < mors.size(); ++i)
    if (!reached[i])
      throw std::invalid_argument("category '" + name + "': generators do not generate morphism '" +
                                  mors[i].name + "'");
}

std::string FinCategory::verify() const {
  for (size_t o = 0; o < objects.size(); ++o) {
    int e = identity[o];
    if (mors[e].src != static_cast<int>(o) || mors[e].tgt != static_cast<int>(o))
      return "identity of '" + objects[o] + "' has wrong endpoints";
  }
  for (size_t f = 0; f < mors.size(); ++f)
    for (size_t g = 0; g < mors.size(); ++g) {
      int c = compose(static_cast<int>(g), static_cast<int>(f));
      bool should = mors[f].tgt == mors[g].src;
      if (should && c < 0) return "missing composite " + mors[g].name + " . " + mors[f].name;
      if (!should && c >= 0) return "spurious composite " + mors[g].name + " . " + mors[f].name;
      if (c >= 0 && (mors[c].src != mors[f].src || mors[c].tgt != mors[g].tgt))
        return "composite endpoints wrong for " + mors[g].name + " . " + mors[f].name;
    }
  for (size_t f = 0; f < mors.size(); ++f) {
    if (compose(static_cast<int>(f), identity[mors[f].src]) != static_cast<int>(f))
      return "right unit law fails at " + mors[f].name;
    if (compose(identity[mors[f].tgt], static_cast<int>(f)) != static_cast<int>(f))
      return "left unit law fails at " + mors[f].name;
  }
  // associativity over all composable triples
  for (size_t f = 0; f < mors.size(); ++f) {
    for (size_t o = 0; o < objects.size(); ++o) {
      for (int g : hom(mors[f].tgt, static_cast<int>(o))) {
        int gf = compose(g, static_cast<int>(f));
        for (size_t o2 = 0; o2 < objects.size(); ++o2)
          for (int h : hom(static_cast<int>(o), static_cast<int>(o2))) {
            if (compose(h, gf) != compose(compose(h, g), static_cast<int>(f)))
              return "associativity fails on (" + mors[h].name + ", " + mors[g].name + ", " +
                     mors[f].name + ")";
          }
      }
    }
  }
  return "";
}

CatPtr terminal_category() {
  auto c = std::make_shared<FinCategory>();
  c->name = "1";
  c->objects = {"*"};
  c->mors = {{"id_*", 0, 0}};
  c->identity = {0};
  c->set_composite(0, 0, 0);
  c->finalize();
  return c;
}

CatPtr discrete_category(const std::vector<std::string>& objs) {
  auto c = std::make_shared<FinCategory>();
  c->name = "discrete";
  c->objects = objs;
  for (size_t i = 0; i < objs.size(); ++i) {
    c->identity.push_back(static_cast<int>(i));
    c->mors.push_back({"id_" + objs[i], static_cast<int>(i), static_cast<int>(i)});
    c->set_composite(static_cast<int>(i), static_cast<int>(i), static_cast<int>(i));
  }
  c->finalize();
  return c;
}

// ---------------------------------------------------------------- saturate

namespace {

struct Rule {
  std::vector<int> lhs, rhs;
};

// rules indexed by the first arrow of the left-hand side
struct RuleIndex {
  std::vector<Rule> rules;
  std::vector<std::vector<int>> by_head;

  void build(int n_arrows) {
    by_head.assign(n_arrows, {});
    for (size_t i = 0; i < rules.size(); ++i) by_head[rules[i].lhs[0]].push_back(static_cast<int>(i));
  }
};

// total order used to orient rules: length first, then lexicographic on arrow names
bool path_less(const Quiver& q, const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = 0; i < a.size(); ++i)
    if (q.arrows[a[i]].name != q.arrows[b[i]].name) return q.arrows[a[i]].name < q.arrows[b[i]].name;
  return false;
}

bool apply_rules_once(const RuleIndex& ri, std::vector<int>& w) {
  for (size_t pos = 0; pos < w.size(); ++pos)
    for (int rid : ri.by_head[w[pos]]) {
      const Rule& r = ri.rules[rid];
      if (pos + r.lhs.size() > w.size()) continue;
      if (std::equal(r.lhs.begin(), r.lhs.end(), w.begin() + pos)) {
        std::vector<int> next(w.begin(), w.begin() + pos);
        next.insert(next.end(), r.rhs.begin(), r.rhs.end());
        next.insert(next.end(), w.begin() + pos + r.lhs.size(), w.end());
        w = std::move(next);
        return true;
      }
    }
  return false;
}

void normalize_word(const RuleIndex& ri, std::vector<int>& w) {
  while (apply_rules_once(ri, w)) {
  }
}

std::string path_display(const Quiver& q, const std::vector<int>& w, int obj_if_empty) {
  if (w.empty()) return "id_" + q.vertices[obj_if_empty];
  std::string s;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (!s.empty()) s += ".";
    s += q.arrows[*it].name;
  }
  return s;
}

}  // namespace

SaturationResult saturate(const PresentedCategory& pc, int bound) {
  if (bound < 1) throw std::invalid_argument("saturate: bound must be >= 1");
  if (auto e = pc.validate(); !e.empty()) throw std::invalid_argument("saturate: " + e);
  const Quiver& q = pc.quiver;

  RuleIndex ri;
  for (auto& [l, r] : pc.relations) {
    if (l.arrows == r.arrows) continue;
    if (path_less(q, l.arrows, r.arrows))
      ri.rules.push_back({r.arrows, l.arrows});
    else
      ri.rules.push_back({l.arrows, r.arrows});
  }
  std::sort(ri.rules.begin(), ri.rules.end(), [&](const Rule& a, const Rule& b) {
    return path_less(q, b.lhs, a.lhs);  // longer lhs tried first; deterministic
  });
  ri.rules.erase(std::unique(ri.rules.begin(), ri.rules.end(),
                             [](const Rule& a, const Rule& b) {
                               return a.lhs == b.lhs && a.rhs == b.rhs;
                             }),
                 ri.rules.end());
  ri.build(static_cast<int>(q.arrows.size()));

  // local confluence of the oriented system (critical pairs; diagnostic only)
  bool confluent = true;
  for (auto& r1 : ri.rules) {
    // overlaps: proper suffix of r1.lhs = prefix of r2.lhs
    for (size_t k = 1; k <= r1.lhs.size(); ++k) {
      for (int rid2 : ri.by_head[r1.lhs[r1.lhs.size() - k]]) {
        const Rule& r2 = ri.rules[rid2];
        if (k > r2.lhs.size()) continue;
        if (!std::equal(r2.lhs.begin(), r2.lhs.begin() + k, r1.lhs.end() - k)) continue;
        if (k == r1.lhs.size() && r2.lhs.size() <= r1.lhs.size()) {
          // r2.lhs inside r1.lhs starting at 0 (includes r1 == r2)
          std::vector<int> via1(r1.rhs);
          std::vector<int> via2(r2.rhs);
          via2.insert(via2.end(), r1.lhs.begin() + r2.lhs.size(), r1.lhs.end());
          normalize_word(ri, via1);
          normalize_word(ri, via2);
          if (via1 != via2) confluent = false;
          continue;
        }
        std::vector<int> via1(r1.rhs);
        via1.insert(via1.end(), r2.lhs.begin() + k, r2.lhs.end());
        std::vector<int> via2(r1.lhs.begin(), r1.lhs.end() - k);
        via2.insert(via2.end(), r2.rhs.begin(), r2.rhs.end());
        normalize_word(ri, via1);
        normalize_word(ri, via2);
        if (via1 != via2) confluent = false;
      }
    }
    // r2.lhs strictly inside r1.lhs at a positive offset
    for (size_t pos = 1; pos < r1.lhs.size(); ++pos)
      for (int rid2 : ri.by_head[r1.lhs[pos]]) {
        const Rule& r2 = ri.rules[rid2];
        if (pos + r2.lhs.size() > r1.lhs.size()) continue;
        if (!std::equal(r2.lhs.begin(), r2.lhs.end(), r1.lhs.begin() + pos)) continue;
        std::vector<int> via1(r1.rhs);
        std::vector<int> via2(r1.lhs.begin(), r1.lhs.begin() + pos);
        via2.insert(via2.end(), r2.rhs.begin(), r2.rhs.end());
        via2.insert(via2.end(), r1.lhs.begin() + pos + r2.lhs.size(), r1.lhs.end());
        normalize_word(ri, via1);
        normalize_word(ri, via2);
        if (via1 != via2) confluent = false;
      }
  }

  // BFS over normal-form paths; prefixes of normal forms are normal, so
  // right-extension by single arrows reaches every normal form.
  struct State {
    int src;
    std::vector<int> word;
    int tgt;
  };
  std::map<std::pair<int, std::vector<int>>, int> seen;
  std::vector<State> states;
  std::vector<std::vector<int>> hom_count(q.vertices.size(), std::vector<int>(q.vertices.size(), 0));
  std::deque<int> queue;

  auto add_state = [&](int src, std::vector<int> w, int tgt) -> int {
    auto it = seen.find({src, w});
    if (it != seen.end()) return it->second;
    int idx = static_cast<int>(states.size());
    seen.emplace(std::make_pair(src, w), idx);
    states.push_back({src, std::move(w), tgt});
    hom_count[src][tgt]++;
    queue.push_back(idx);
    return idx;
  };

  for (size_t v = 0; v < q.vertices.size(); ++v) add_state(static_cast<int>(v), {}, static_cast<int>(v));

  while (!queue.empty()) {
    int si = queue.front();
    queue.pop_front();
    State st = states[si];
    for (size_t a = 0; a < q.arrows.size(); ++a) {
      if (q.arrows[a].src != st.tgt) continue;
      std::vector<int> w = st.word;
      w.push_back(static_cast<int>(a));
      normalize_word(ri, w);
      int tgt = w.empty() ? st.src : q.arrows[w.back()].tgt;
      // a rewrite may not change endpoints; recompute defensively
      if (!w.empty()) {
        int at = q.arrows[w.front()].src;
        if (at != st.src) throw std::logic_error("saturate: rewrite changed path source");
        for (int x : w) at = q.arrows[x].tgt;
        tgt = at;
      } else {
        tgt = st.src;
      }
      if (seen.count({st.src, w})) continue;
      if (hom_count[st.src][tgt] + 1 > bound) {
        SaturationResult res;
        res.non_finite = NonFiniteReport{q.vertices[st.src], q.vertices[tgt],
                                         hom_count[st.src][tgt] + 1, bound};
        res.rules_locally_confluent = confluent;
        return res;
      }
      add_state(st.src, std::move(w), tgt);
    }
  }

  auto cat = std::make_shared<FinCategory>();
  cat->name = "saturated";
  cat->objects = q.vertices;
  cat->identity.assign(q.vertices.size(), -1);
  for (size_t i = 0; i < states.size(); ++i) {
    const State& st = states[i];
    cat->mors.push_back({path_display(q, st.word, st.src), st.src, st.tgt});
    if (st.word.empty()) cat->identity[st.src] = static_cast<int>(i);
  }
  auto lookup = [&](int src, const std::vector<int>& w) {
    auto it = seen.find({src, w});
    if (it == seen.end()) throw std::logic_error("saturate: closure is missing a composite");
    return it->second;
  };
  for (size_t f = 0; f < states.size(); ++f)
    for (size_t g = 0; g < states.size(); ++g) {
      if (states[f].tgt != states[g].src) continue;
      std::vector<int> w = states[f].word;
      w.insert(w.end(), states[g].word.begin(), states[g].word.end());
      normalize_word(ri, w);
      cat->set_composite(static_cast<int>(g), static_cast<int>(f), lookup(states[f].src, w));
    }

  SaturationResult res;
  res.rules_locally_confluent = confluent;
  res.arrow_mor.resize(q.arrows.size());
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    std::vector<int> w{static_cast<int>(a)};
    normalize_word(ri, w);
    res.arrow_mor[a] = lookup(q.arrows[a].src, w);
  }
  // generators: irreducible arrows
  std::set<int> gens;
  for (size_t a = 0; a < q.arrows.size(); ++a)
    if (!cat->is_identity(res.arrow_mor[a])) gens.insert(res.arrow_mor[a]);
  cat->generators.assign(gens.begin(), gens.end());
  cat->finalize();
  if (auto e = cat->verify(); !e.empty())
    throw std::runtime_error("saturate: resulting table is not a category (" + e +
                             "); presentation outside the supported classes");
  res.cat = cat;
  return res;
}

// ---------------------------------------------------------------- functors

FunctorMap identity_functor(const CatPtr& c) {
  FunctorMap f;
  f.name = "id";
  f.dom = f.cod = c;
  f.ob.resize(c->objects.size());
  f.mor.resize(c->mors.size());
  for (size_t i = 0; i < f.ob.size(); ++i) f.ob[i] = static_cast<int>(i);
  for (size_t i = 0; i < f.mor.size(); ++i) f.mor[i] = static_cast<int>(i);
  return f;
}

FunctorMap compose_functors(const FunctorMap& g, const FunctorMap& f) {
  if (f.cod != g.dom) throw std::invalid_argument("compose_functors: domain mismatch");
  FunctorMap h;
  h.name = g.name + "∘" + f.name;
  h.dom = f.dom;
  h.cod = g.cod;
  h.ob.resize(f.ob.size());
  h.mor.resize(f.mor.size());
  for (size_t i = 0; i < f.ob.size(); ++i) h.ob[i] = g.ob[f.ob[i]];
  for (size_t i = 0; i < f.mor.size(); ++i) h.mor[i] = g.mor[f.mor[i]];
  return h;
}

FunctorReport check_functor(const FunctorMap& f) {
  const auto& A = *f.dom;
  const auto& B = *f.cod;
  if (f.ob.size() != A.objects.size() || f.mor.size() != A.mors.size())
    return {false, "object/morphism map has wrong size"};
  for (size_t m = 0; m < A.mors.size(); ++m) {
    int fm = f.mor[m];
    if (fm < 0 || fm >= static_cast<int>(B.mors.size())) return {false, "image out of range"};
    if (B.mors[fm].src != f.ob[A.mors[m].src] || B.mors[fm].tgt != f.ob[A.mors[m].tgt])
      return {false, "endpoints not preserved at '" + A.mors[m].name + "'"};
  }
  for (size_t o = 0; o < A.objects.size(); ++o)
    if (f.mor[A.identity[o]] != B.identity[f.ob[o]])
      return {false, "identity not preserved at '" + A.objects[o] + "'"};
  for (size_t m = 0; m < A.mors.size(); ++m)
    for (size_t g = 0; g < A.mors.size(); ++g) {
      int c = A.compose(static_cast<int>(g), static_cast<int>(m));
      if (c < 0) continue;
      if (B.compose(f.mor[g], f.mor[m]) != f.mor[c])
        return {false, "composition not preserved on (" + A.mors[g].name + ", " + A.mors[m].name + ")"};
    }
  return {true, ""};
}

FunctorMap functor_from_generators(const CatPtr& dom, const CatPtr& cod,
                                   const std::vector<int>& ob_map,
                                   const std::map<int, int>& gen_images, const std::string& name) {
  FunctorMap f;
  f.name = name;
  f.dom = dom;
  f.cod = cod;
  f.ob = ob_map;
  f.mor.assign(dom->mors.size(), -1);
  for (size_t m = 0; m < dom->mors.size(); ++m) {
    const auto& w = dom->witness[m];
    if (w.empty()) {
      f.mor[m] = cod->identity[ob_map[dom->mors[m].src]];
      continue;
    }
    int acc = -1;
    for (int g : w) {
      auto it = gen_images.find(g);
      if (it == gen_images.end())
        throw std::invalid_argument("functor_from_generators: no image for generator '" +
                                    dom->mors[g].name + "'");
      acc = acc < 0 ? it->second : cod->compose(it->second, acc);
      if (acc < 0) throw std::invalid_argument("functor_from_generators: images not composable");
    }
    f.mor[m] = acc;
  }
  if (auto rep = check_functor(f); !rep.ok)
    throw std::invalid_argument("functor_from_generators('" + name + "'): " + rep.issue);
  return f;
}

FunctorReport check_generator_functor(const GeneratorFunctor& f) {
  if (auto e = f.dom.validate(); !e.empty()) return {false, e};
  const Quiver& q = f.dom.quiver;
  const auto& B = *f.cod;
  auto eval_path = [&](const QPath& p) -> int {
    std::vector<int> mors;
    for (int a : p.arrows)
      for (int m : f.arrow_to[a]) mors.push_back(m);
    return B.compose_path(mors, f.ob[p.src]);
  };
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    int at = f.ob[q.arrows[a].src];
    for (int m : f.arrow_to[a]) {
      if (B.mors[m].src != at) return {false, "arrow '" + q.arrows[a].name + "' maps to a non-composable path"};
      at = B.mors[m].tgt;
    }
    if (at != f.ob[q.arrows[a].tgt])
      return {false, "arrow '" + q.arrows[a].name + "' has image with wrong endpoints"};
  }
  for (auto& [l, r] : f.dom.relations) {
    if (eval_path(l) != eval_path(r))
      return {false, "relation not preserved: " + path_display(q, l.arrows, l.src) + " = " +
                         path_display(q, r.arrows, r.src)};
  }
  return {true, ""};
}

// ---------------------------------------------------------------- predicates

FunctorPredicates functor_predicates(const FunctorMap& f) {
  const auto& A = *f.dom;
  const auto& B = *f.cod;
  FunctorPredicates p;

  p.injective_on_objects = true;
  for (size_t i = 0; i < A.objects.size(); ++i)
    for (size_t j = i + 1; j < A.objects.size(); ++j)
      if (f.ob[i] == f.ob[j]) p.injective_on_objects = false;

  p.faithful = true;
  p.fully_faithful = true;
  for (size_t a = 0; a < A.objects.size(); ++a)
    for (size_t b = 0; b < A.objects.size(); ++b) {
      const auto& ha = A.hom(static_cast<int>(a), static_cast<int>(b));
      std::set<int> images;
      for (int m : ha)
        if (!images.insert(f.mor[m]).second) p.faithful = false;
      const auto& hb = B.hom(f.ob[a], f.ob[b]);
      for (int n : hb)
        if (!images.count(n)) p.fully_faithful = false;
    }
  p.fully_faithful = p.fully_faithful && p.faithful;

  std::set<int> ob_image(f.ob.begin(), f.ob.end());
  // sieve: fully faithful, injective on objects, every morphism into the image
  // has its source in the image (so the image is closed under precomposition)
  bool closed_down = true, closed_up = true;
  for (auto& m : B.mors) {
    if (ob_image.count(m.tgt) && !ob_image.count(m.src)) closed_down = false;
    if (ob_image.count(m.src) && !ob_image.count(m.tgt)) closed_up = false;
  }
  p.sieve = p.fully_faithful && p.injective_on_objects && closed_down;
  p.cosieve = p.fully_faithful && p.injective_on_objects && closed_up;

  p.essentially_surjective = true;
  for (size_t b = 0; b < B.objects.size(); ++b) {
    bool hit = false;
    for (int i : ob_image)
      if (B.isomorphic_objects(i, static_cast<int>(b))) hit = true;
    if (!hit) p.essentially_surjective = false;
  }
  return p;
}

bool has_3for2(const FunctorMap& f) {
  const auto& B = *f.cod;
  std::set<int> image(f.mor.begin(), f.mor.end());
  for (size_t al = 0; al < B.mors.size(); ++al)
    for (size_t be = 0; be < B.mors.size(); ++be) {
      int c = B.compose(static_cast<int>(be), static_cast<int>(al));  // βα
      if (c < 0) continue;
      int in = (image.count(static_cast<int>(al)) ? 1 : 0) + (image.count(static_cast<int>(be)) ? 1 : 0) +
               (image.count(c) ? 1 : 0);
      if (in == 2) return false;
    }
  return true;
}

// ---------------------------------------------------------------- slice

int SliceCategory::object_of(int a, int f) const {
  for (size_t i = 0; i < objects.size(); ++i)
    if (objects[i] == std::make_pair(a, f)) return static_cast<int>(i);
  return -1;
}

SliceCategory slice(const FunctorMap& u, int b, SliceSide side) {
  const auto& A = *u.dom;
  const auto& B = *u.cod;
  SliceCategory s;
  auto cat = std::make_shared<FinCategory>();
  cat->name = (side == SliceSide::Under ? "(u/" : "(") + B.objects[b] +
              (side == SliceSide::Under ? ")" : "/u)");

  for (size_t a = 0; a < A.objects.size(); ++a) {
    const auto& h = side == SliceSide::Under ? B.hom(u.ob[a], b) : B.hom(b, u.ob[a]);
    for (int f : h) {
      s.objects.emplace_back(static_cast<int>(a), f);
      cat->objects.push_back("(" + A.objects[a] + "|" + B.mors[f].name + ")");
    }
  }
  // morphisms (a,f) -> (a',f'): h: a -> a' with f' ∘ u(h) = f (under) resp.
  // u(h) ∘ f = f' (over)
  struct SMor {
    int from, to, h;
  };
  std::vector<SMor> smors;
  cat->identity.assign(s.objects.size(), -1);
  for (size_t i = 0; i < s.objects.size(); ++i)
    for (size_t j = 0; j < s.objects.size(); ++j) {
      auto [a, fm] = s.objects[i];
      auto [a2, fm2] = s.objects[j];
      for (int h : A.hom(a, a2)) {
        bool ok = side == SliceSide::Under ? B.compose(fm2, u.mor[h]) == fm
                                           : B.compose(u.mor[h], fm) == fm2;
        if (!ok) continue;
        int idx = static_cast<int>(smors.size());
        smors.push_back({static_cast<int>(i), static_cast<int>(j), h});
        cat->mors.push_back({A.mors[h].name + "@" + cat->objects[i] + ">" + cat->objects[j],
                             static_cast<int>(i), static_cast<int>(j)});
        if (i == j && A.is_identity(h)) cat->identity[i] = idx;
      }
    }
  auto find_smor = [&](int from, int to, int h) {
    for (size_t k = 0; k < smors.size(); ++k)
      if (smors[k].from == from && smors[k].to == to && smors[k].h == h) return static_cast<int>(k);
    throw std::logic_error("slice: composite missing");
  };
  for (size_t f = 0; f < smors.size(); ++f)
    for (size_t g = 0; g < smors.size(); ++g) {
      if (smors[f].to != smors[g].from) continue;
      int h = A.compose(smors[g].h, smors[f].h);
      cat->set_composite(static_cast<int>(g), static_cast<int>(f), find_smor(smors[f].from, smors[g].to, h));
    }
  cat->finalize();
  s.cat = cat;
  s.projection.name = side == SliceSide::Under ? "p" : "q";
  s.projection.dom = cat;
  s.projection.cod = u.dom;
  for (auto& [a, fm] : s.objects) {
    (void)fm;
    s.projection.ob.push_back(a);
  }
  for (auto& m : smors) s.projection.mor.push_back(m.h);
  return s;
}

// ---------------------------------------------------------------- product / opposite

int ProductCategory::object_of(int o1, int o2) const {
  for (size_t i = 0; i < objects.size(); ++i)
    if (objects[i] == std::make_pair(o1, o2)) return static_cast<int>(i);
  return -1;
}
int ProductCategory::mor_of(int m1, int m2) const {
  for (size_t i = 0; i < morphisms.size(); ++i)
    if (morphisms[i] == std::make_pair(m1, m2)) return static_cast<int>(i);
  return -1;
}

ProductCategory product_category(const CatPtr& c1, const CatPtr& c2) {
  ProductCategory p;
  auto cat = std::make_shared<FinCategory>();
  cat->name = c1->name + "x" + c2->name;
  std::map<std::pair<int, int>, int> ob_idx, mor_idx;
  for (size_t i = 0; i < c1->objects.size(); ++i)
    for (size_t j = 0; j < c2->objects.size(); ++j) {
      ob_idx[{static_cast<int>(i), static_cast<int>(j)}] = static_cast<int>(p.objects.size());
      p.objects.emplace_back(static_cast<int>(i), static_cast<int>(j));
      cat->objects.push_back("(" + c1->objects[i] + "," + c2->objects[j] + ")");
    }
  cat->identity.assign(p.objects.size(), -1);
  for (size_t i = 0; i < c1->mors.size(); ++i)
    for (size_t j = 0; j < c2->mors.size(); ++j) {
      int idx = static_cast<int>(p.morphisms.size());
      mor_idx[{static_cast<int>(i), static_cast<int>(j)}] = idx;
      p.morphisms.emplace_back(static_cast<int>(i), static_cast<int>(j));
      int src = ob_idx[{c1->mors[i].src, c2->mors[j].src}];
      int tgt = ob_idx[{c1->mors[i].tgt, c2->mors[j].tgt}];
      cat->mors.push_back({"(" + c1->mors[i].name + "," + c2->mors[j].name + ")", src, tgt});
      if (c1->is_identity(static_cast<int>(i)) && c2->is_identity(static_cast<int>(j)))
        cat->identity[src] = idx;
    }
  for (size_t f = 0; f < p.morphisms.size(); ++f)
    for (size_t g = 0; g < p.morphisms.size(); ++g) {
      auto [f1, f2] = p.morphisms[f];
      auto [g1, g2] = p.morphisms[g];
      int c1c = c1->compose(g1, f1);
      int c2c = c2->compose(g2, f2);
      if (c1c < 0 || c2c < 0) continue;
      cat->set_composite(static_cast<int>(g), static_cast<int>(f), mor_idx[{c1c, c2c}]);
    }
  // generators: (gen, id) and (id, gen)
  for (int g : c1->generators)
    for (size_t j = 0; j < c2->objects.size(); ++j)
      cat->generators.push_back(mor_idx[{g, c2->identity[j]}]);
  for (int g : c2->generators)
    for (size_t i = 0; i < c1->objects.size(); ++i)
      cat->generators.push_back(mor_idx[{c1->identity[i], g}]);
  cat->finalize();
  p.cat = cat;
  return p;
}

CatPtr opposite_category(const CatPtr& c) {
  auto op = std::make_shared<FinCategory>();
  op->name = c->name + "^op";
  op->objects = c->objects;
  op->identity = c->identity;
  for (auto& m : c->mors) op->mors.push_back({m.name, m.tgt, m.src});
  for (size_t f = 0; f < c->mors.size(); ++f)
    for (size_t g = 0; g < c->mors.size(); ++g) {
      int h = c->compose(static_cast<int>(g), static_cast<int>(f));
      if (h >= 0) op->set_composite(static_cast<int>(f), static_cast<int>(g), h);
    }
  op->generators = c->generators;
  op->finalize();
  return op;
}

ProductCategory power_category(const CatPtr& c, int n) {
  if (n < 1) throw std::invalid_argument("power_category: n >= 1");
  ProductCategory acc;
  acc.cat = c;
  for (size_t i = 0; i < c->objects.size(); ++i) acc.objects.emplace_back(static_cast<int>(i), -1);
  for (size_t i = 0; i < c->mors.size(); ++i) acc.morphisms.emplace_back(static_cast<int>(i), -1);
  for (int k = 1; k < n; ++k) acc = product_category(acc.cat, c);
  return acc;
}

SubcategoryResult full_subcategory(const CatPtr& c, const std::vector<int>& objs,
                                   const std::string& name) {
  auto sub = std::make_shared<FinCategory>();
  sub->name = name.empty() ? c->name + "|sub" : name;
  std::vector<int> ob_to_sub(c->objects.size(), -1);
  for (size_t i = 0; i < objs.size(); ++i) {
    ob_to_sub[objs[i]] = static_cast<int>(i);
    sub->objects.push_back(c->objects[objs[i]]);
  }
  std::vector<int> mor_to_sub(c->mors.size(), -1), mor_of_sub;
  for (size_t m = 0; m < c->mors.size(); ++m) {
    if (ob_to_sub[c->mors[m].src] < 0 || ob_to_sub[c->mors[m].tgt] < 0) continue;
    mor_to_sub[m] = static_cast<int>(mor_of_sub.size());
    mor_of_sub.push_back(static_cast<int>(m));
    sub->mors.push_back({c->mors[m].name, ob_to_sub[c->mors[m].src], ob_to_sub[c->mors[m].tgt]});
  }
  sub->identity.assign(objs.size(), -1);
  for (size_t i = 0; i < objs.size(); ++i) sub->identity[i] = mor_to_sub[c->identity[objs[i]]];
  for (size_t f = 0; f < mor_of_sub.size(); ++f)
    for (size_t g = 0; g < mor_of_sub.size(); ++g) {
      int h = c->compose(mor_of_sub[g], mor_of_sub[f]);
      if (h >= 0 && mor_to_sub[h] >= 0)
        sub->set_composite(static_cast<int>(g), static_cast<int>(f), mor_to_sub[h]);
    }
  sub->finalize();
  SubcategoryResult r;
  r.cat = sub;
  r.inclusion.name = "incl";
  r.inclusion.dom = sub;
  r.inclusion.cod = c;
  r.inclusion.ob = objs;
  r.inclusion.mor = mor_of_sub;
  return r;
}

FunctorMap product_functor(const ProductCategory& dom, const ProductCategory& cod,
                           const FunctorMap& f1, const FunctorMap& f2) {
  FunctorMap f;
  f.name = "(" + f1.name + "," + f2.name + ")";
  f.dom = dom.cat;
  f.cod = cod.cat;
  for (auto& [o1, o2] : dom.objects) f.ob.push_back(cod.object_of(f1.ob[o1], f2.ob[o2]));
  for (auto& [m1, m2] : dom.morphisms) f.mor.push_back(cod.mor_of(f1.mor[m1], f2.mor[m2]));
  if (auto rep = check_functor(f); !rep.ok)
    throw std::logic_error("product_functor: " + rep.issue);
  return f;
}

// ---------------------------------------------------------------- transforms, adjoints

bool check_cat_transform(const FunctorMap& src, const FunctorMap& dst,
                         const std::vector<int>& component) {
  if (src.dom != dst.dom || src.cod != dst.cod) return false;
  const auto& A = *src.dom;
  const auto& B = *src.cod;
  for (size_t a = 0; a < A.objects.size(); ++a) {
    int t = component[a];
    if (B.mors[t].src != src.ob[a] || B.mors[t].tgt != dst.ob[a]) return false;
  }
  for (size_t m = 0; m < A.mors.size(); ++m) {
    int a = A.mors[m].src, b = A.mors[m].tgt;
    if (B.compose(component[b], src.mor[m]) != B.compose(dst.mor[m], component[a])) return false;
  }
  return true;
}

namespace {

// terminal object of a category: unique morphism from every object (incl. itself)
std::optional<int> terminal_object(const FinCategory& c) {
  for (size_t t = 0; t < c.objects.size(); ++t) {
    bool ok = true;
    for (size_t x = 0; x < c.objects.size(); ++x)
      if (c.hom(static_cast<int>(x), static_cast<int>(t)).size() != 1) ok = false;
    if (ok) return static_cast<int>(t);
  }
  return std::nullopt;
}

std::optional<int> initial_object(const FinCategory& c) {
  for (size_t t = 0; t < c.objects.size(); ++t) {
    bool ok = true;
    for (size_t x = 0; x < c.objects.size(); ++x)
      if (c.hom(static_cast<int>(t), static_cast<int>(x)).size() != 1) ok = false;
    if (ok) return static_cast<int>(t);
  }
  return std::nullopt;
}

}  // namespace

std::optional<Adjunction> find_adjoint(const FunctorMap& f, AdjointSide side) {
  const auto& A = *f.dom;
  const auto& B = *f.cod;

  if (side == AdjointSide::Right) {
    // G with f ⊣ G: for each b, (f/b) has a terminal object (G b, ε_b)
    FunctorMap g;
    g.name = f.name + "^R";
    g.dom = f.cod;
    g.cod = f.dom;
    g.ob.assign(B.objects.size(), -1);
    std::vector<int> counit(B.objects.size(), -1);
    for (size_t b = 0; b < B.objects.size(); ++b) {
      SliceCategory s = slice(f, static_cast<int>(b), SliceSide::Under);
      auto t = terminal_object(*s.cat);
      if (!t) return std::nullopt;
      g.ob[b] = s.objects[*t].first;
      counit[b] = s.objects[*t].second;  // ε_b: f(G b) -> b
    }
    g.mor.assign(B.mors.size(), -1);
    for (size_t k = 0; k < B.mors.size(); ++k) {
      int b = B.mors[k].src, b2 = B.mors[k].tgt;
      // unique h: G b -> G b' with ε_{b'} ∘ f(h) = k ∘ ε_b
      int want = B.compose(static_cast<int>(k), counit[b]);
      int found = -1;
      for (int h : A.hom(g.ob[b], g.ob[b2])) {
        if (B.compose(counit[b2], f.mor[h]) == want) {
          if (found >= 0) return std::nullopt;  // not unique; no adjoint
          found = h;
        }
      }
      if (found < 0) return std::nullopt;
      g.mor[k] = found;
    }
    if (auto rep = check_functor(g); !rep.ok) return std::nullopt;
    // unit η_a: a -> G f a, unique with ε_{f a} ∘ f(η_a) = id
    std::vector<int> unit(A.objects.size(), -1);
    for (size_t a = 0; a < A.objects.size(); ++a) {
      int fa = f.ob[a];
      int found = -1;
      for (int h : A.hom(static_cast<int>(a), g.ob[fa]))
        if (B.compose(counit[fa], f.mor[h]) == B.identity[fa]) {
          if (found >= 0) return std::nullopt;
          found = h;
        }
      if (found < 0) return std::nullopt;
      unit[a] = found;
    }
    // naturality + triangle identities
    auto gf = compose_functors(g, f);
    auto fg = compose_functors(f, g);
    if (!check_cat_transform(identity_functor(f.dom), gf, unit)) return std::nullopt;
    if (!check_cat_transform(fg, identity_functor(f.cod), counit)) return std::nullopt;
    for (size_t a = 0; a < A.objects.size(); ++a)
      if (B.compose(counit[f.ob[a]], f.mor[unit[a]]) != B.identity[f.ob[a]]) return std::nullopt;
    for (size_t b = 0; b < B.objects.size(); ++b)
      if (A.compose(g.mor[counit[b]], unit[g.ob[b]]) != A.identity[g.ob[b]]) return std::nullopt;
    Adjunction adj;
    adj.left = f;
    adj.right = g;
    adj.unit = unit;
    adj.counit = counit;
    return adj;
  }

  // side == Left: G with G ⊣ f: for each b, (b/f) has an initial object (G b, η_b)
  FunctorMap g;
  g.name = f.name + "^L";
  g.dom = f.cod;
  g.cod = f.dom;
  g.ob.assign(B.objects.size(), -1);
  std::vector<int> unit(B.objects.size(), -1);
  for (size_t b = 0; b < B.objects.size(); ++b) {
    SliceCategory s = slice(f, static_cast<int>(b), SliceSide::Over);
    auto t = initial_object(*s.cat);
    if (!t) return std::nullopt;
    g.ob[b] = s.objects[*t].first;
    unit[b] = s.objects[*t].second;  // η_b: b -> f(G b)
  }
  g.mor.assign(B.mors.size(), -1);
  for (size_t k = 0; k < B.mors.size(); ++k) {
    int b = B.mors[k].src, b2 = B.mors[k].tgt;
    int want = B.compose(unit[b2], static_cast<int>(k));
    int found = -1;
    for (int h : A.hom(g.ob[b], g.ob[b2]))
      if (B.compose(f.mor[h], unit[b]) == want) {
        if (found >= 0) return std::nullopt;
        found = h;
      }
    if (found < 0) return std::nullopt;
    g.mor[k] = found;
  }
  if (auto rep = check_functor(g); !rep.ok) return std::nullopt;
  std::vector<int> counit(A.objects.size(), -1);
  for (size_t a = 0; a < A.objects.size(); ++a) {
    int fa = f.ob[a];
    int found = -1;
    for (int h : A.hom(g.ob[fa], static_cast<int>(a)))
      if (B.compose(f.mor[h], unit[fa]) == B.identity[fa]) {
        if (found >= 0) return std::nullopt;
        found = h;
      }
    if (found < 0) return std::nullopt;
    counit[a] = found;
  }
  auto fg = compose_functors(f, g);  // on B
  auto gf = compose_functors(g, f);  // on A
  if (!check_cat_transform(identity_functor(f.cod), fg, unit)) return std::nullopt;
  if (!check_cat_transform(gf, identity_functor(f.dom), counit)) return std::nullopt;
  // (εG)(Gη) = id_G and (fε)(ηf) = id_f
  for (size_t b = 0; b < B.objects.size(); ++b)
    if (A.compose(counit[g.ob[b]], g.mor[unit[b]]) != A.identity[g.ob[b]]) return std::nullopt;
  for (size_t a = 0; a < A.objects.size(); ++a)
    if (B.compose(f.mor[counit[a]], unit[f.ob[a]]) != B.identity[f.ob[a]]) return std::nullopt;
  Adjunction adj;
  adj.left = g;
  adj.right = f;
  adj.unit = unit;
  adj.counit = counit;
  return adj;
}

// ---------------------------------------------------------------- comparisons

bool same_table(const FinCategory& a, const FinCategory& b) {
  if (a.objects != b.objects) return false;
  if (a.mors.size() != b.mors.size()) return false;
  for (size_t i = 0; i < a.mors.size(); ++i)
    if (a.mors[i].name != b.mors[i].name || a.mors[i].src != b.mors[i].src ||
        a.mors[i].tgt != b.mors[i].tgt)
      return false;
  if (a.identity != b.identity) return false;
  for (size_t f = 0; f < a.mors.size(); ++f)
    for (size_t g = 0; g < a.mors.size(); ++g)
      if (a.compose(static_cast<int>(g), static_cast<int>(f)) !=
          b.compose(static_cast<int>(g), static_cast<int>(f)))
        return false;
  return true;
}

namespace {

bool extend_iso(const CatPtr& a, const CatPtr& b, std::vector<int>& ob_map,
                std::vector<char>& used, size_t next) {
  const auto& A = *a;
  const auto& B = *b;
  while (next < ob_map.size() && ob_map[next] >= 0) ++next;
  if (next == ob_map.size()) {
    // object bijection fixed; check hom-set sizes, then search morphism maps greedily
    for (size_t x = 0; x < A.objects.size(); ++x)
      for (size_t y = 0; y < A.objects.size(); ++y)
        if (A.hom(static_cast<int>(x), static_cast<int>(y)).size() !=
            B.hom(ob_map[x], ob_map[y]).size())
          return false;
    // try to build a functor generator-by-generator by backtracking
    std::map<int, int> gen_img;
    std::vector<int> gens = A.generators;
    std::function<bool(size_t)> rec = [&](size_t gi) -> bool {
      if (gi == gens.size()) {
        try {
          FunctorMap f = functor_from_generators(a, b, ob_map, gen_img, "iso?");
          std::set<int> img(f.mor.begin(), f.mor.end());
          return img.size() == B.mors.size();
        } catch (const std::exception&) {
          return false;
        }
      }
      int g = gens[gi];
      for (int cand : B.hom(ob_map[A.mors[g].src], ob_map[A.mors[g].tgt])) {
        gen_img[g] = cand;
        if (rec(gi + 1)) return true;
      }
      gen_img.erase(g);
      return false;
    };
    return rec(0);
  }
  for (size_t cand = 0; cand < B.objects.size(); ++cand) {
    if (used[cand]) continue;
    ob_map[next] = static_cast<int>(cand);
    used[cand] = 1;
    if (extend_iso(a, b, ob_map, used, next + 1)) return true;
    used[cand] = 0;
    ob_map[next] = -1;
  }
  return false;
}

}  // namespace

std::optional<FunctorMap> find_isomorphism(const CatPtr& a, const CatPtr& b,
                                           const std::map<int, int>& partial_ob) {
  if (a->objects.size() != b->objects.size() || a->mors.size() != b->mors.size())
    return std::nullopt;
  std::vector<int> ob_map(a->objects.size(), -1);
  std::vector<char> used(b->objects.size(), 0);
  for (auto& [x, y] : partial_ob) {
    ob_map[x] = y;
    used[y] = 1;
  }
  if (!extend_iso(a, b, ob_map, used, 0)) return std::nullopt;
  // rebuild the functor that extend_iso found
  const auto& A = *a;
  std::map<int, int> gen_img;
  std::function<std::optional<FunctorMap>(size_t)> rec = [&](size_t gi) -> std::optional<FunctorMap> {
    if (gi == A.generators.size()) {
      try {
        FunctorMap f = functor_from_generators(a, b, ob_map, gen_img, "iso");
        std::set<int> img(f.mor.begin(), f.mor.end());
        if (img.size() == b->mors.size()) return f;
      } catch (const std::exception&) {
      }
      return std::nullopt;
    }
    int g = A.generators[gi];
    for (int cand : b->hom(ob_map[A.mors[g].src], ob_map[A.mors[g].tgt])) {
      gen_img[g] = cand;
      if (auto f = rec(gi + 1)) return f;
    }
    gen_img.erase(g);
    return std::nullopt;
  };
  return rec(0);
}

}  // namespace reflekt
