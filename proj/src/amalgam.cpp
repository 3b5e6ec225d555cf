#include "reflekt/amalgam.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace reflekt {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool functor_faithful(const FunctorMap& f) {
  const auto& A = *f.dom;
  for (size_t a = 0; a < A.objects.size(); ++a)
    for (size_t b = 0; b < A.objects.size(); ++b) {
      std::set<int> images;
      for (int m : A.hom(static_cast<int>(a), static_cast<int>(b)))
        if (!images.insert(f.mor[m]).second) return false;
    }
  return true;
}

bool functor_injective_on_objects(const FunctorMap& f) {
  std::set<int> seen;
  for (int o : f.ob)
    if (!seen.insert(o).second) return false;
  return true;
}

bool cat_discrete(const FinCategory& c) {
  return c.mors.size() == c.objects.size();
}

}  // namespace

// ---------------------------------------------------------------- pushout

AmalgamResult pushout(const Span& s, const PushoutOptions& opt) {
  if (s.fX.dom != s.W || s.fY.dom != s.W || s.fX.cod != s.X || s.fY.cod != s.Y)
    throw AmalgamError("pushout: span legs do not match W, X, Y");
  bool discrete = cat_discrete(*s.W);
  bool repeats_ok = discrete && opt.allow_repeats_on_discrete;

  if (!functor_faithful(s.fX)) throw AmalgamError("pushout: leg W -> X is not faithful");
  if (!functor_faithful(s.fY)) throw AmalgamError("pushout: leg W -> Y is not faithful");
  if (!repeats_ok) {
    if (!functor_injective_on_objects(s.fX))
      throw AmalgamError("pushout: leg W -> X is not injective on objects");
    if (!functor_injective_on_objects(s.fY))
      throw AmalgamError("pushout: leg W -> Y is not injective on objects");
  }
  if (!discrete) {
    if (!has_3for2(s.fX)) throw AmalgamError("pushout: leg W -> X lacks the 3-for-2 property");
    if (!has_3for2(s.fY)) throw AmalgamError("pushout: leg W -> Y lacks the 3-for-2 property");
  }

  AmalgamResult z;
  z.span = s;
  z.kind = discrete ? AmalgamKind::NormalFormComplete : AmalgamKind::BoundedSearch;

  // objects: pushout of object sets
  int nx = static_cast<int>(s.X->objects.size());
  int ny = static_cast<int>(s.Y->objects.size());
  UnionFind uf(nx + ny);
  for (size_t w = 0; w < s.W->objects.size(); ++w) uf.unite(s.fX.ob[w], nx + s.fY.ob[w]);
  std::map<int, int> root_to_z;
  z.zob_of_x.resize(nx);
  z.zob_of_y.resize(ny);
  std::set<std::string> used_names;
  auto fresh_name = [&](std::string base) {
    while (used_names.count(base)) base += "'";
    used_names.insert(base);
    return base;
  };
  for (int i = 0; i < nx; ++i) {
    int r = uf.find(i);
    auto it = root_to_z.find(r);
    if (it == root_to_z.end()) {
      it = root_to_z.emplace(r, static_cast<int>(z.z_objects.size())).first;
      z.z_objects.push_back(fresh_name(s.X->objects[i]));
    }
    z.zob_of_x[i] = it->second;
  }
  for (int j = 0; j < ny; ++j) {
    int r = uf.find(nx + j);
    auto it = root_to_z.find(r);
    if (it == root_to_z.end()) {
      it = root_to_z.emplace(r, static_cast<int>(z.z_objects.size())).first;
      z.z_objects.push_back(fresh_name(s.Y->objects[j]));
    }
    z.zob_of_y[j] = it->second;
  }

  // W-shared morphisms (identified in the pushout of morphism sets)
  z.y_twin_of_x_.assign(s.X->mors.size(), -1);
  z.x_twin_of_y_.assign(s.Y->mors.size(), -1);
  for (size_t m = 0; m < s.W->mors.size(); ++m) {
    int xm = s.fX.mor[m], ym = s.fY.mor[m];
    z.y_twin_of_x_[xm] = ym;
    z.x_twin_of_y_[ym] = xm;
  }

  if (!discrete) {
    // presentation: generators are the non-identity morphisms of X and of
    // Y - fY(W), relations are the leg composition tables
    PresentedCategory pres;
    pres.quiver.vertices = z.z_objects;
    std::set<std::string> arrow_names;
    auto fresh_arrow = [&](std::string base) {
      while (arrow_names.count(base)) base += "~";
      arrow_names.insert(base);
      return base;
    };
    z.arrow_of_x.assign(s.X->mors.size(), -1);
    z.arrow_of_y.assign(s.Y->mors.size(), -1);
    for (size_t m = 0; m < s.X->mors.size(); ++m) {
      if (s.X->is_identity(static_cast<int>(m))) continue;
      z.arrow_of_x[m] = static_cast<int>(pres.quiver.arrows.size());
      pres.quiver.arrows.push_back({fresh_arrow(s.X->mors[m].name), z.zob_of_x[s.X->mors[m].src],
                                    z.zob_of_x[s.X->mors[m].tgt]});
    }
    for (size_t m = 0; m < s.Y->mors.size(); ++m) {
      if (s.Y->is_identity(static_cast<int>(m))) continue;
      if (z.x_twin_of_y_[m] >= 0) {
        z.arrow_of_y[m] = z.arrow_of_x[z.x_twin_of_y_[m]];
        continue;
      }
      z.arrow_of_y[m] = static_cast<int>(pres.quiver.arrows.size());
      pres.quiver.arrows.push_back({fresh_arrow(s.Y->mors[m].name), z.zob_of_y[s.Y->mors[m].src],
                                    z.zob_of_y[s.Y->mors[m].tgt]});
    }
    auto add_leg_relations = [&](const FinCategory& L, const std::vector<int>& arrow_of,
                                 const std::vector<int>& zob_of) {
      for (size_t f = 0; f < L.mors.size(); ++f) {
        if (L.is_identity(static_cast<int>(f))) continue;
        for (size_t g = 0; g < L.mors.size(); ++g) {
          if (L.is_identity(static_cast<int>(g))) continue;
          int c = L.compose(static_cast<int>(g), static_cast<int>(f));
          if (c < 0) continue;
          QPath lhs{zob_of[L.mors[f].src], {arrow_of[f], arrow_of[g]}, zob_of[L.mors[g].tgt]};
          QPath rhs{lhs.src, {}, lhs.tgt};
          if (!L.is_identity(c)) rhs.arrows = {arrow_of[c]};
          pres.relations.emplace_back(lhs, rhs);
        }
      }
    };
    add_leg_relations(*s.X, z.arrow_of_x, z.zob_of_x);
    add_leg_relations(*s.Y, z.arrow_of_y, z.zob_of_y);
    z.presentation = std::move(pres);
  }
  return z;
}

// ---------------------------------------------------------------- word calculus

int AmalgamResult::z_src_of(const TaggedMor& e) const {
  return e.leg == 0 ? zob_of_x[span.X->mors[e.mor].src] : zob_of_y[span.Y->mors[e.mor].src];
}
int AmalgamResult::z_tgt_of(const TaggedMor& e) const {
  return e.leg == 0 ? zob_of_x[span.X->mors[e.mor].tgt] : zob_of_y[span.Y->mors[e.mor].tgt];
}

std::optional<int> AmalgamResult::lift_to_leg(const TaggedMor& e, int leg) const {
  if (e.leg == leg) return e.mor;
  if (e.leg == 1 && leg == 0) return x_twin_of_y_[e.mor] >= 0 ? std::optional<int>(x_twin_of_y_[e.mor]) : std::nullopt;
  if (e.leg == 0 && leg == 1) return y_twin_of_x_[e.mor] >= 0 ? std::optional<int>(y_twin_of_x_[e.mor]) : std::nullopt;
  return std::nullopt;
}

Word AmalgamResult::make_word(int src, const std::vector<TaggedMor>& entries) const {
  Word w;
  w.src = src;
  int at = src;
  for (TaggedMor e : entries) {
    bool is_id = e.leg == 0 ? span.X->is_identity(e.mor) : span.Y->is_identity(e.mor);
    if (z_src_of(e) != at) throw AmalgamError("make_word: entries are not an allowable sequence");
    at = z_tgt_of(e);
    if (is_id) continue;  // identities come from W and are eliminated eagerly
    if (e.leg == 1 && x_twin_of_y_[e.mor] >= 0) e = {0, x_twin_of_y_[e.mor]};
    w.entries.push_back(e);
  }
  w.tgt = at;
  return w;
}

Word AmalgamResult::word_of_leg(int leg, int mor) const {
  const FinCategory& L = leg == 0 ? *span.X : *span.Y;
  int src = leg == 0 ? zob_of_x[L.mors[mor].src] : zob_of_y[L.mors[mor].src];
  return make_word(src, {TaggedMor{leg, mor}});
}

std::vector<Word> AmalgamResult::reductions(const Word& w) const {
  std::vector<Word> out;
  for (size_t i = 0; i + 1 < w.entries.size(); ++i)
    for (int leg = 0; leg < 2; ++leg) {
      auto m1 = lift_to_leg(w.entries[i], leg);
      auto m2 = lift_to_leg(w.entries[i + 1], leg);
      if (!m1 || !m2) continue;
      const FinCategory& L = leg == 0 ? *span.X : *span.Y;
      if (L.mors[*m1].tgt != L.mors[*m2].src) continue;
      int c = L.compose(*m2, *m1);
      std::vector<TaggedMor> entries(w.entries.begin(), w.entries.begin() + i);
      if (!L.is_identity(c)) entries.push_back({leg, c});
      entries.insert(entries.end(), w.entries.begin() + i + 2, w.entries.end());
      Word r = make_word(w.src, entries);
      if (!(r == w) && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    }
  return out;
}

std::vector<Word> AmalgamResult::expansions(const Word& w) const {
  std::vector<Word> out;
  for (size_t i = 0; i < w.entries.size(); ++i)
    for (int leg = 0; leg < 2; ++leg) {
      auto m = lift_to_leg(w.entries[i], leg);
      if (!m) continue;
      const FinCategory& L = leg == 0 ? *span.X : *span.Y;
      int a = L.mors[*m].src, b = L.mors[*m].tgt;
      for (size_t mid = 0; mid < L.objects.size(); ++mid)
        for (int m1 : L.hom(a, static_cast<int>(mid)))
          for (int m2 : L.hom(static_cast<int>(mid), b)) {
            if (L.compose(m2, m1) != *m) continue;
            if (L.is_identity(m1) || L.is_identity(m2)) continue;  // undone by eager elimination
            std::vector<TaggedMor> entries(w.entries.begin(), w.entries.begin() + i);
            entries.push_back({leg, m1});
            entries.push_back({leg, m2});
            entries.insert(entries.end(), w.entries.begin() + i + 1, w.entries.end());
            Word r = make_word(w.src, entries);
            if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
          }
    }
  return out;
}

Word AmalgamResult::reduce(const Word& w0) const {
  Word w = make_word(w0.src, w0.entries);
  for (;;) {
    bool changed = false;
    for (size_t i = 0; i + 1 < w.entries.size() && !changed; ++i)
      for (int leg = 0; leg < 2 && !changed; ++leg) {
        auto m1 = lift_to_leg(w.entries[i], leg);
        auto m2 = lift_to_leg(w.entries[i + 1], leg);
        if (!m1 || !m2) continue;
        const FinCategory& L = leg == 0 ? *span.X : *span.Y;
        if (L.mors[*m1].tgt != L.mors[*m2].src) continue;
        int c = L.compose(*m2, *m1);
        std::vector<TaggedMor> entries(w.entries.begin(), w.entries.begin() + i);
        if (!L.is_identity(c)) entries.push_back({leg, c});
        entries.insert(entries.end(), w.entries.begin() + i + 2, w.entries.end());
        w = make_word(w.src, entries);
        changed = true;
      }
    if (!changed) return w;
  }
}

Word AmalgamResult::compose(const Word& g, const Word& f) const {
  if (f.tgt != g.src) throw AmalgamError("word compose: endpoints do not match");
  std::vector<TaggedMor> entries = f.entries;
  entries.insert(entries.end(), g.entries.begin(), g.entries.end());
  return reduce(Word{f.src, g.tgt, std::move(entries)});
}

Word reduce_word(const AmalgamResult& z, const Word& w) { return z.reduce(w); }

EqualResult decide_equal(const AmalgamResult& z, const Word& w1, const Word& w2, int depth) {
  Word a = z.reduce(w1), b = z.reduce(w2);
  if (a.src != b.src || a.tgt != b.tgt) throw AmalgamError("decide_equal: words are not parallel");
  if (z.kind == AmalgamKind::NormalFormComplete)
    return {a == b ? EqualVerdict::Equal : EqualVerdict::Distinct, 0};

  if (a == b) return {EqualVerdict::Equal, 0};
  // bidirectional search through elementary reductions and expansions,
  // restricted to words of at most `depth` entries
  auto cap = static_cast<size_t>(depth);
  std::set<Word> seen_a{a}, seen_b{b};
  std::deque<Word> qa{a}, qb{b};
  auto step = [&](std::deque<Word>& q, std::set<Word>& mine, const std::set<Word>& other) -> int {
    size_t n = q.size();
    for (size_t i = 0; i < n; ++i) {
      Word w = q.front();
      q.pop_front();
      std::vector<Word> nexts = z.reductions(w);
      for (auto& e : z.expansions(w))
        if (e.entries.size() <= cap) nexts.push_back(e);
      for (auto& nw : nexts) {
        if (mine.count(nw)) continue;
        if (other.count(nw)) return 1;
        mine.insert(nw);
        q.push_back(nw);
      }
    }
    return 0;
  };
  for (int d = 1; d <= depth; ++d) {
    if (qa.empty() && qb.empty()) break;
    if (step(qa, seen_a, seen_b)) return {EqualVerdict::Equal, d};
    if (step(qb, seen_b, seen_a)) return {EqualVerdict::Equal, d};
  }
  return {EqualVerdict::Unknown, depth};
}

// ---------------------------------------------------------------- materialize

int MaterializedAmalgam::z_mor_of(const Word& nf) const {
  for (size_t i = 0; i < words.size(); ++i)
    if (words[i] == nf) return static_cast<int>(i);
  return -1;
}

namespace {

std::string word_display(const AmalgamResult& z, const Word& w,
                         const std::set<std::string>& x_names) {
  if (w.entries.empty()) return "id_" + z.z_objects[w.src];
  std::string s;
  for (auto it = w.entries.rbegin(); it != w.entries.rend(); ++it) {
    if (!s.empty()) s += ".";
    std::string n =
        it->leg == 0 ? z.span.X->mors[it->mor].name : z.span.Y->mors[it->mor].name;
    if (it->leg == 1 && x_names.count(n)) n += "~Y";
    s += n;
  }
  return s;
}

MaterializeOutcome materialize_discrete(const AmalgamResult& z, int bound) {
  std::map<Word, int> index;
  std::vector<Word> words;
  std::vector<std::vector<int>> hom_count(z.z_objects.size(),
                                          std::vector<int>(z.z_objects.size(), 0));
  std::deque<int> queue;
  auto add = [&](const Word& w) -> std::optional<int> {
    auto it = index.find(w);
    if (it != index.end()) return it->second;
    if (hom_count[w.src][w.tgt] + 1 > bound) return std::nullopt;
    int idx = static_cast<int>(words.size());
    index.emplace(w, idx);
    words.push_back(w);
    hom_count[w.src][w.tgt]++;
    queue.push_back(idx);
    return idx;
  };

  std::vector<TaggedMor> gens;
  for (size_t m = 0; m < z.span.X->mors.size(); ++m)
    if (!z.span.X->is_identity(static_cast<int>(m))) gens.push_back({0, static_cast<int>(m)});
  for (size_t m = 0; m < z.span.Y->mors.size(); ++m)
    if (!z.span.Y->is_identity(static_cast<int>(m))) gens.push_back({1, static_cast<int>(m)});

  for (size_t o = 0; o < z.z_objects.size(); ++o)
    if (!add(z.identity_word(static_cast<int>(o)))) {
      return {std::nullopt, NonFiniteReport{z.z_objects[o], z.z_objects[o], 1, bound}};
    }
  while (!queue.empty()) {
    int wi = queue.front();
    queue.pop_front();
    Word w = words[wi];
    for (const TaggedMor& g : gens) {
      if (z.z_src_of(g) != w.tgt) continue;
      std::vector<TaggedMor> entries = w.entries;
      entries.push_back(g);
      Word nw = z.reduce(Word{w.src, z.z_tgt_of(g), std::move(entries)});
      if (!add(nw))
        return {std::nullopt,
                NonFiniteReport{z.z_objects[nw.src], z.z_objects[nw.tgt], bound + 1, bound}};
    }
  }

  std::set<std::string> x_names;
  for (auto& m : z.span.X->mors) x_names.insert(m.name);

  auto cat = std::make_shared<FinCategory>();
  cat->name = "pushout";
  cat->objects = z.z_objects;
  cat->identity.assign(z.z_objects.size(), -1);
  for (size_t i = 0; i < words.size(); ++i) {
    cat->mors.push_back({word_display(z, words[i], x_names), words[i].src, words[i].tgt});
    if (words[i].entries.empty()) cat->identity[words[i].src] = static_cast<int>(i);
  }
  for (size_t f = 0; f < words.size(); ++f)
    for (size_t g = 0; g < words.size(); ++g) {
      if (words[f].tgt != words[g].src) continue;
      Word c = z.compose(words[g], words[f]);
      auto it = index.find(c);
      if (it == index.end())
        throw AmalgamError("materialize: closure is missing a composite");
      cat->set_composite(static_cast<int>(g), static_cast<int>(f), it->second);
    }
  for (const TaggedMor& g : gens) {
    Word nf = z.reduce(z.make_word(z.z_src_of(g), {g}));
    auto it = index.find(nf);
    if (it != index.end() && !nf.entries.empty()) cat->generators.push_back(it->second);
  }
  std::sort(cat->generators.begin(), cat->generators.end());
  cat->generators.erase(std::unique(cat->generators.begin(), cat->generators.end()),
                        cat->generators.end());
  cat->finalize();
  if (auto e = cat->verify(); !e.empty())
    throw AmalgamError("materialize: pushout table failed verification (" + e + ")");

  MaterializedAmalgam M;
  M.Z = cat;
  M.words = words;
  M.gX.name = "g_X";
  M.gX.dom = z.span.X;
  M.gX.cod = cat;
  M.gX.ob = z.zob_of_x;
  for (size_t m = 0; m < z.span.X->mors.size(); ++m)
    M.gX.mor.push_back(index.at(z.reduce(z.word_of_leg(0, static_cast<int>(m)))));
  M.gY.name = "g_Y";
  M.gY.dom = z.span.Y;
  M.gY.cod = cat;
  M.gY.ob = z.zob_of_y;
  for (size_t m = 0; m < z.span.Y->mors.size(); ++m)
    M.gY.mor.push_back(index.at(z.reduce(z.word_of_leg(1, static_cast<int>(m)))));
  return {std::move(M), std::nullopt};
}

MaterializeOutcome materialize_presented(const AmalgamResult& z, int bound) {
  SaturationResult sat = saturate(*z.presentation, bound);
  if (!sat.cat) return {std::nullopt, sat.non_finite};
  MaterializedAmalgam M;
  M.Z = sat.cat;
  // reconstruct a normal word per morphism from the saturated witness paths
  const auto& pres = *z.presentation;
  std::vector<TaggedMor> arrow_entry(pres.quiver.arrows.size());
  for (size_t m = 0; m < z.span.X->mors.size(); ++m)
    if (z.arrow_of_x[m] >= 0) arrow_entry[z.arrow_of_x[m]] = {0, static_cast<int>(m)};
  for (size_t m = 0; m < z.span.Y->mors.size(); ++m)
    if (z.arrow_of_y[m] >= 0 && z.x_twin_of_y(static_cast<int>(m)) < 0)
      arrow_entry[z.arrow_of_y[m]] = {1, static_cast<int>(m)};
  std::map<int, int> gen_to_arrow;  // saturated generator morphism -> quiver arrow
  for (size_t a = 0; a < pres.quiver.arrows.size(); ++a) gen_to_arrow[sat.arrow_mor[a]] = static_cast<int>(a);
  for (size_t m = 0; m < sat.cat->mors.size(); ++m) {
    std::vector<TaggedMor> entries;
    for (int g : sat.cat->witness[m]) entries.push_back(arrow_entry[gen_to_arrow.at(g)]);
    M.words.push_back(z.make_word(sat.cat->mors[m].src, entries));
  }
  M.gX.name = "g_X";
  M.gX.dom = z.span.X;
  M.gX.cod = sat.cat;
  M.gX.ob = z.zob_of_x;
  for (size_t m = 0; m < z.span.X->mors.size(); ++m)
    M.gX.mor.push_back(z.arrow_of_x[m] >= 0 ? sat.arrow_mor[z.arrow_of_x[m]]
                                            : sat.cat->identity[z.zob_of_x[z.span.X->mors[m].src]]);
  M.gY.name = "g_Y";
  M.gY.dom = z.span.Y;
  M.gY.cod = sat.cat;
  M.gY.ob = z.zob_of_y;
  for (size_t m = 0; m < z.span.Y->mors.size(); ++m)
    M.gY.mor.push_back(z.arrow_of_y[m] >= 0 ? sat.arrow_mor[z.arrow_of_y[m]]
                                            : sat.cat->identity[z.zob_of_y[z.span.Y->mors[m].src]]);
  return {std::move(M), std::nullopt};
}

}  // namespace

MaterializeOutcome materialize(const AmalgamResult& z, int bound) {
  return z.w_discrete() ? materialize_discrete(z, bound) : materialize_presented(z, bound);
}

AmalgamationReport verify_amalgamation(const AmalgamResult& z, int bound) {
  AmalgamationReport rep;
  auto out = materialize(z, bound);
  if (!out.amalgam) {
    rep.non_finite = out.non_finite;
    rep.detail = "not materializable within bound";
    return rep;
  }
  rep.materialized = true;
  const auto& M = *out.amalgam;
  if (auto c = check_functor(M.gX); !c.ok) {
    rep.detail = "g_X is not a functor: " + c.issue;
    return rep;
  }
  if (auto c = check_functor(M.gY); !c.ok) {
    rep.detail = "g_Y is not a functor: " + c.issue;
    return rep;
  }
  rep.gx_injective_on_objects = functor_injective_on_objects(M.gX);
  rep.gy_injective_on_objects = functor_injective_on_objects(M.gY);
  rep.gx_faithful = functor_faithful(M.gX);
  rep.gy_faithful = functor_faithful(M.gY);
  rep.gx_3for2 = has_3for2(M.gX);
  rep.gy_3for2 = has_3for2(M.gY);

  auto px = functor_predicates(z.span.fX);
  auto py = functor_predicates(z.span.fY);
  if (px.fully_faithful && py.faithful && has_3for2(z.span.fY)) {
    rep.a9_applicable_to_gy = true;
    rep.gy_fully_faithful = functor_predicates(M.gY).fully_faithful;
  }
  if (py.fully_faithful && px.faithful && has_3for2(z.span.fX)) {
    rep.a9_applicable_to_gx = true;
    rep.gx_fully_faithful = functor_predicates(M.gX).fully_faithful;
  }
  return rep;
}

}  // namespace reflekt
