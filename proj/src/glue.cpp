#include "reflekt/glue.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace reflekt {

namespace {

std::string fresh_against(const std::vector<std::string>& taken, std::string base) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "'";
  return base;
}

}  // namespace

// ---------------------------------------------------------------- basic builders

CoproductCategory coproduct_category(const CatPtr& c1, const CatPtr& c2) {
  CoproductCategory co;
  auto cat = std::make_shared<FinCategory>();
  cat->name = c1->name + "+" + c2->name;
  std::set<std::string> onames, mnames;
  auto fresh = [](std::set<std::string>& pool, std::string base) {
    while (pool.count(base)) base += "'";
    pool.insert(base);
    return base;
  };
  for (size_t i = 0; i < c1->objects.size(); ++i) {
    co.ob_origin.emplace_back(1, static_cast<int>(i));
    cat->objects.push_back(fresh(onames, c1->objects[i]));
  }
  for (size_t i = 0; i < c2->objects.size(); ++i) {
    co.ob_origin.emplace_back(2, static_cast<int>(i));
    cat->objects.push_back(fresh(onames, c2->objects[i]));
  }
  int off_ob = static_cast<int>(c1->objects.size());
  int off_mor = static_cast<int>(c1->mors.size());
  for (size_t i = 0; i < c1->mors.size(); ++i) {
    co.mor_origin.emplace_back(1, static_cast<int>(i));
    cat->mors.push_back({fresh(mnames, c1->mors[i].name), c1->mors[i].src, c1->mors[i].tgt});
  }
  for (size_t i = 0; i < c2->mors.size(); ++i) {
    co.mor_origin.emplace_back(2, static_cast<int>(i));
    cat->mors.push_back(
        {fresh(mnames, c2->mors[i].name), off_ob + c2->mors[i].src, off_ob + c2->mors[i].tgt});
  }
  cat->identity.resize(cat->objects.size());
  for (size_t o = 0; o < c1->objects.size(); ++o) cat->identity[o] = c1->identity[o];
  for (size_t o = 0; o < c2->objects.size(); ++o) cat->identity[off_ob + o] = off_mor + c2->identity[o];
  for (size_t f = 0; f < c1->mors.size(); ++f)
    for (size_t g = 0; g < c1->mors.size(); ++g) {
      int h = c1->compose(static_cast<int>(g), static_cast<int>(f));
      if (h >= 0) cat->set_composite(static_cast<int>(g), static_cast<int>(f), h);
    }
  for (size_t f = 0; f < c2->mors.size(); ++f)
    for (size_t g = 0; g < c2->mors.size(); ++g) {
      int h = c2->compose(static_cast<int>(g), static_cast<int>(f));
      if (h >= 0)
        cat->set_composite(off_mor + static_cast<int>(g), off_mor + static_cast<int>(f), off_mor + h);
    }
  for (int g : c1->generators) cat->generators.push_back(g);
  for (int g : c2->generators) cat->generators.push_back(off_mor + g);
  cat->finalize();
  co.cat = cat;
  co.inj1.name = "inj1";
  co.inj1.dom = c1;
  co.inj1.cod = cat;
  for (size_t o = 0; o < c1->objects.size(); ++o) co.inj1.ob.push_back(static_cast<int>(o));
  for (size_t m = 0; m < c1->mors.size(); ++m) co.inj1.mor.push_back(static_cast<int>(m));
  co.inj2.name = "inj2";
  co.inj2.dom = c2;
  co.inj2.cod = cat;
  for (size_t o = 0; o < c2->objects.size(); ++o) co.inj2.ob.push_back(off_ob + static_cast<int>(o));
  for (size_t m = 0; m < c2->mors.size(); ++m) co.inj2.mor.push_back(off_mor + static_cast<int>(m));
  return co;
}

CatPtr point_category(const std::string& obj) {
  auto c = std::make_shared<FinCategory>();
  c->name = obj;
  c->objects = {obj};
  c->mors = {{"id_" + obj, 0, 0}};
  c->identity = {0};
  c->set_composite(0, 0, 0);
  c->finalize();
  return c;
}

CatPtr chain_category(int n_objects) {
  auto c = std::make_shared<FinCategory>();
  c->name = "[" + std::to_string(n_objects - 1) + "]";
  for (int i = 0; i < n_objects; ++i) c->objects.push_back(std::to_string(i));
  c->identity.assign(n_objects, -1);
  std::map<std::pair<int, int>, int> idx;
  for (int i = 0; i < n_objects; ++i)
    for (int j = i; j < n_objects; ++j) {
      idx[{i, j}] = static_cast<int>(c->mors.size());
      std::string nm = i == j ? "id_" + std::to_string(i) : std::to_string(i) + "->" + std::to_string(j);
      c->mors.push_back({nm, i, j});
      if (i == j) c->identity[i] = idx[{i, j}];
    }
  for (auto& [p1, m1] : idx)
    for (auto& [p2, m2] : idx)
      if (p1.second == p2.first) c->set_composite(m2, m1, idx[{p1.first, p2.second}]);
  for (int i = 0; i + 1 < n_objects; ++i) c->generators.push_back(idx[{i, i + 1}]);
  c->finalize();
  return c;
}

ConeOverResult cone_over(const CatPtr& base, const std::string& tip_name, int dir_source) {
  ConeOverResult r;
  auto c = std::make_shared<FinCategory>();
  c->name = base->name + (dir_source ? "^<" : "^>");
  std::string tip = fresh_against(base->objects, tip_name);
  c->objects = base->objects;
  c->objects.push_back(tip);
  r.tip = static_cast<int>(base->objects.size());
  c->mors = base->mors;
  c->identity = base->identity;
  int id_tip = static_cast<int>(c->mors.size());
  c->mors.push_back({"id_" + tip, r.tip, r.tip});
  c->identity.push_back(id_tip);
  int first_arrow = static_cast<int>(c->mors.size());
  for (size_t o = 0; o < base->objects.size(); ++o) {
    if (dir_source)
      c->mors.push_back({tip + "->" + base->objects[o], r.tip, static_cast<int>(o)});
    else
      c->mors.push_back({base->objects[o] + "->" + tip, static_cast<int>(o), r.tip});
    r.tip_arrows.push_back(first_arrow + static_cast<int>(o));
  }
  for (size_t f = 0; f < base->mors.size(); ++f)
    for (size_t g = 0; g < base->mors.size(); ++g) {
      int h = base->compose(static_cast<int>(g), static_cast<int>(f));
      if (h >= 0) c->set_composite(static_cast<int>(g), static_cast<int>(f), h);
    }
  c->set_composite(id_tip, id_tip, id_tip);
  for (size_t o = 0; o < base->objects.size(); ++o) {
    int arr = r.tip_arrows[o];
    if (dir_source) {
      c->set_composite(arr, id_tip, arr);
      c->set_composite(base->identity[o], arr, arr);
      // (f: o -> o') ∘ (tip -> o) = tip -> o'
      for (size_t m = 0; m < base->mors.size(); ++m)
        if (base->mors[m].src == static_cast<int>(o))
          c->set_composite(static_cast<int>(m), arr, r.tip_arrows[base->mors[m].tgt]);
    } else {
      c->set_composite(id_tip, arr, arr);
      c->set_composite(arr, base->identity[o], arr);
      for (size_t m = 0; m < base->mors.size(); ++m)
        if (base->mors[m].tgt == static_cast<int>(o))
          c->set_composite(arr, static_cast<int>(m), r.tip_arrows[base->mors[m].src]);
    }
  }
  for (int g : base->generators) c->generators.push_back(g);
  // one tip arrow per "minimal" object suffices, but all of them is simpler
  for (int a : r.tip_arrows) c->generators.push_back(a);
  c->finalize();
  if (auto e = c->verify(); !e.empty()) throw std::logic_error("cone_over: " + e);
  r.cat = c;
  r.inclusion.name = "incl";
  r.inclusion.dom = base;
  r.inclusion.cod = c;
  for (size_t o = 0; o < base->objects.size(); ++o) r.inclusion.ob.push_back(static_cast<int>(o));
  for (size_t m = 0; m < base->mors.size(); ++m) r.inclusion.mor.push_back(static_cast<int>(m));
  return r;
}

FunctorMap thin_functor(const CatPtr& dom, const CatPtr& cod, const std::vector<int>& ob_map,
                        const std::string& name) {
  FunctorMap f;
  f.name = name;
  f.dom = dom;
  f.cod = cod;
  f.ob = ob_map;
  for (size_t m = 0; m < dom->mors.size(); ++m) {
    const auto& h = cod->hom(ob_map[dom->mors[m].src], ob_map[dom->mors[m].tgt]);
    if (h.size() != 1)
      throw std::invalid_argument("thin_functor('" + name + "'): codomain hom-set not a singleton");
    f.mor.push_back(h[0]);
  }
  if (auto rep = check_functor(f); !rep.ok)
    throw std::invalid_argument("thin_functor('" + name + "'): " + rep.issue);
  return f;
}

// ---------------------------------------------------------------- gluing

GluingResult free_oriented_gluing(const CatPtr& A1, const CatPtr& A2, const std::vector<int>& s,
                                  const std::vector<int>& t,
                                  const std::vector<std::string>& beta_names, int bound) {
  if (s.size() != t.size()) throw std::invalid_argument("free_oriented_gluing: |s| != |t|");
  int n = static_cast<int>(s.size());
  GluingResult g;
  g.A1 = A1;
  g.A2 = A2;
  g.s = s;
  g.t = t;
  g.copr = coproduct_category(A1, A2);

  // Y: n disjoint free arrows
  auto Y = std::make_shared<FinCategory>();
  Y->name = "n[1]";
  for (int k = 0; k < n; ++k) {
    Y->objects.push_back("\xce\xb2" + std::to_string(k + 1) + "s");
    Y->objects.push_back("\xce\xb2" + std::to_string(k + 1) + "t");
  }
  Y->identity.assign(Y->objects.size(), -1);
  for (int o = 0; o < static_cast<int>(Y->objects.size()); ++o) {
    Y->identity[o] = static_cast<int>(Y->mors.size());
    Y->mors.push_back({"id_" + Y->objects[o], o, o});
    Y->set_composite(Y->identity[o], Y->identity[o], Y->identity[o]);
  }
  std::vector<int> y_arrow(n);
  for (int k = 0; k < n; ++k) {
    std::string nm = k < static_cast<int>(beta_names.size()) ? beta_names[k]
                                                             : "b" + std::to_string(k + 1);
    y_arrow[k] = static_cast<int>(Y->mors.size());
    Y->mors.push_back({nm, 2 * k, 2 * k + 1});
    int a = y_arrow[k];
    Y->set_composite(a, Y->identity[2 * k], a);
    Y->set_composite(Y->identity[2 * k + 1], a, a);
  }
  Y->finalize();

  std::vector<std::string> w_names;
  for (int k = 0; k < n; ++k) w_names.push_back("ws" + std::to_string(k + 1));
  for (int k = 0; k < n; ++k) w_names.push_back("wt" + std::to_string(k + 1));
  CatPtr W = discrete_category(w_names);

  Span span;
  span.W = W;
  span.X = g.copr.cat;
  span.Y = Y;
  span.fX.name = "s+t";
  span.fX.dom = W;
  span.fX.cod = g.copr.cat;
  for (int k = 0; k < n; ++k) span.fX.ob.push_back(g.copr.inj1.ob[s[k]]);
  for (int k = 0; k < n; ++k) span.fX.ob.push_back(g.copr.inj2.ob[t[k]]);
  for (int o = 0; o < 2 * n; ++o) span.fX.mor.push_back(g.copr.cat->identity[span.fX.ob[o]]);
  span.fY.name = "ends";
  span.fY.dom = W;
  span.fY.cod = Y;
  for (int k = 0; k < n; ++k) span.fY.ob.push_back(2 * k);
  for (int k = 0; k < n; ++k) span.fY.ob.push_back(2 * k + 1);
  for (int o = 0; o < 2 * n; ++o) span.fY.mor.push_back(Y->identity[span.fY.ob[o]]);

  PushoutOptions opt;
  opt.allow_repeats_on_discrete = true;
  g.push = pushout(span, opt);
  auto out = materialize(g.push, bound);
  if (!out.amalgam)
    throw std::runtime_error("free_oriented_gluing: hom-set bound exceeded at Hom(" +
                             out.non_finite->hom_src + ", " + out.non_finite->hom_tgt + ")");
  g.M = *out.amalgam;
  g.A = g.M.Z;
  g.i1 = compose_functors(g.M.gX, g.copr.inj1);
  g.i1.name = "i1";
  g.i2 = compose_functors(g.M.gX, g.copr.inj2);
  g.i2.name = "i2";
  for (int k = 0; k < n; ++k) g.beta.push_back(g.M.gY.mor[y_arrow[k]]);

  // object origins
  g.ob_origin.assign(g.A->objects.size(), {-1, -1});
  for (size_t o = 0; o < g.copr.cat->objects.size(); ++o)
    g.ob_origin[g.push.zob_of_x[o]] = g.copr.ob_origin[o];

  // classify every morphism by its normal word
  std::map<int, int> beta_of_yarrow;
  for (int k = 0; k < n; ++k) beta_of_yarrow[y_arrow[k]] = k;
  g.cls.resize(g.A->mors.size());
  for (size_t m = 0; m < g.A->mors.size(); ++m) {
    const Word& w = g.M.words[m];
    GluingResult::Class c;
    if (w.entries.empty()) {
      auto [side, orig] = g.ob_origin[w.src];
      c.kind = side == 1 ? GluingResult::Kind::In1 : GluingResult::Kind::In2;
      c.m = side == 1 ? A1->identity[orig] : A2->identity[orig];
    } else if (w.entries.size() == 1 && w.entries[0].leg == 0) {
      auto [side, orig] = g.copr.mor_origin[w.entries[0].mor];
      c.kind = side == 1 ? GluingResult::Kind::In1 : GluingResult::Kind::In2;
      c.m = orig;
    } else {
      // cross: [A1-part?, beta_k, A2-part?]
      size_t i = 0;
      int f1 = -1, f2 = -1, k = -1;
      if (w.entries[i].leg == 0) {
        auto [side, orig] = g.copr.mor_origin[w.entries[i].mor];
        if (side != 1) throw std::logic_error("gluing: unexpected word shape");
        f1 = orig;
        ++i;
      }
      if (i >= w.entries.size() || w.entries[i].leg != 1)
        throw std::logic_error("gluing: unexpected word shape (no beta)");
      k = beta_of_yarrow.at(w.entries[i].mor);
      ++i;
      if (i < w.entries.size()) {
        if (w.entries[i].leg != 0) throw std::logic_error("gluing: two betas in one word");
        auto [side, orig] = g.copr.mor_origin[w.entries[i].mor];
        if (side != 2) throw std::logic_error("gluing: unexpected word tail");
        f2 = orig;
        ++i;
      }
      if (i != w.entries.size()) throw std::logic_error("gluing: overlong word");
      c.kind = GluingResult::Kind::Cross;
      c.k = k;
      c.f1 = f1 >= 0 ? f1 : A1->identity[s[k]];
      c.f2 = f2 >= 0 ? f2 : A2->identity[t[k]];
    }
    g.cls[m] = c;
  }
  return g;
}

StandardFactorization standard_factorization(const GluingResult& g, int mor) {
  const auto& c = g.cls.at(mor);
  if (c.kind != GluingResult::Kind::Cross)
    throw std::invalid_argument("standard_factorization: morphism stays within one leg");
  return {c.k, c.f1, c.f2};
}

GluingLemmaReport check_gluing_lemma(const GluingResult& g) {
  GluingLemmaReport rep;
  auto p1 = functor_predicates(g.i1);
  auto p2 = functor_predicates(g.i2);
  rep.images_fully_faithful = p1.fully_faithful && p2.fully_faithful;

  std::set<int> im1(g.i1.ob.begin(), g.i1.ob.end());
  std::set<int> im2(g.i2.ob.begin(), g.i2.ob.end());
  rep.images_disjoint = true;
  for (int o : im1)
    if (im2.count(o)) rep.images_disjoint = false;
  rep.jointly_surjective = true;
  for (size_t o = 0; o < g.A->objects.size(); ++o)
    if (!im1.count(static_cast<int>(o)) && !im2.count(static_cast<int>(o)))
      rep.jointly_surjective = false;

  rep.no_backward_morphisms = true;
  for (auto& m : g.A->mors)
    if (im2.count(m.src) && im1.count(m.tgt)) rep.no_backward_morphisms = false;

  rep.factorizations_unique = true;
  for (size_t m = 0; m < g.A->mors.size(); ++m) {
    if (!im1.count(g.A->mors[m].src) || !im2.count(g.A->mors[m].tgt)) continue;
    auto [side_a, a1] = g.ob_origin[g.A->mors[m].src];
    auto [side_b, a2] = g.ob_origin[g.A->mors[m].tgt];
    if (side_a != 1 || side_b != 2) continue;
    int count = 0;
    for (int k = 0; k < g.n(); ++k)
      for (int f1 : g.A1->hom(a1, g.s[k]))
        for (int f2 : g.A2->hom(g.t[k], a2)) {
          int comp = g.A->compose(g.i2.mor[f2], g.A->compose(g.beta[k], g.i1.mor[f1]));
          if (comp == static_cast<int>(m)) ++count;
        }
    if (count != 1) {
      rep.factorizations_unique = false;
      rep.detail = "morphism '" + g.A->mors[m].name + "' has " + std::to_string(count) +
                   " standard factorizations";
    }
  }
  return rep;
}

FunctorMap functor_on_gluing(const GluingResult& g, const CatPtr& target, const std::string& name,
                             const std::vector<int>& ob_img,
                             const std::function<std::vector<int>(int side, int mor)>& leg_img,
                             const std::function<std::vector<int>(int k)>& beta_img) {
  std::map<int, int> beta_of_yarrow;
  // recover y arrow indices from the words of the betas
  for (int k = 0; k < g.n(); ++k) {
    const Word& w = g.M.words[g.beta[k]];
    for (auto& e : w.entries)
      if (e.leg == 1) beta_of_yarrow[e.mor] = k;
  }
  FunctorMap f;
  f.name = name;
  f.dom = g.A;
  f.cod = target;
  f.ob = ob_img;
  for (size_t m = 0; m < g.A->mors.size(); ++m) {
    const Word& w = g.M.words[m];
    std::vector<int> path;
    for (auto& e : w.entries) {
      std::vector<int> piece;
      if (e.leg == 0) {
        auto [side, orig] = g.copr.mor_origin[e.mor];
        piece = leg_img(side, orig);
      } else {
        piece = beta_img(beta_of_yarrow.at(e.mor));
      }
      path.insert(path.end(), piece.begin(), piece.end());
    }
    f.mor.push_back(target->compose_path(path, ob_img[w.src]));
  }
  if (auto rep = check_functor(f); !rep.ok)
    throw std::logic_error("functor_on_gluing('" + name + "'): " + rep.issue);
  return f;
}

FunctorMap induced_gluing_functor(const GluingResult& g, const GluingResult& gp,
                                  const FunctorMap& sigma, const std::string& name) {
  if (gp.A2 != g.A2) throw std::invalid_argument("induced_gluing_functor: A2 differs");
  std::vector<int> ob_img(g.A->objects.size(), -1);
  for (size_t o = 0; o < g.A->objects.size(); ++o) {
    auto [side, orig] = g.ob_origin[o];
    ob_img[o] = side == 1 ? gp.i1.ob[sigma.ob[orig]] : gp.i2.ob[orig];
  }
  return functor_on_gluing(
      g, gp.A, name, ob_img,
      [&](int side, int mor) -> std::vector<int> {
        return {side == 1 ? gp.i1.mor[sigma.mor[mor]] : gp.i2.mor[mor]};
      },
      [&](int k) -> std::vector<int> { return {gp.beta[k]}; });
}

// ---------------------------------------------------------------- cones, separation

ConeResult attach_cone(const CatPtr& C, const std::vector<int>& ys, ConeDirection dir, int bound) {
  ConeResult r;
  r.direction = dir;
  int n = static_cast<int>(ys.size());
  std::vector<std::string> arrow_names;
  if (dir == ConeDirection::Source) {
    CatPtr pt = point_category(fresh_against(C->objects, "v"));
    for (int k = 0; k < n; ++k) arrow_names.push_back("a" + std::to_string(k + 1));
    r.glue = free_oriented_gluing(pt, C, std::vector<int>(n, 0), ys, arrow_names, bound);
    r.cat = r.glue.A;
    r.inclusion = r.glue.i2;
    r.tip = r.glue.i1.ob[0];
  } else {
    CatPtr pt = point_category(fresh_against(C->objects, "w"));
    for (int k = 0; k < n; ++k) arrow_names.push_back("b" + std::to_string(k + 1));
    r.glue = free_oriented_gluing(C, pt, ys, std::vector<int>(n, 0), arrow_names, bound);
    r.cat = r.glue.A;
    r.inclusion = r.glue.i1;
    r.tip = r.glue.i2.ob[0];
  }
  r.inclusion.name = "incl_C";
  r.cone_arrows = r.glue.beta;
  return r;
}

namespace {

// the source cone over n points: v with arrows v -> x_k (no composites)
ConeOverResult free_cone_n(int n, const std::vector<std::string>& avoid, ConeDirection dir) {
  std::vector<std::string> pts;
  for (int k = 0; k < n; ++k) pts.push_back(fresh_against(avoid, "x" + std::to_string(k + 1)));
  CatPtr base = discrete_category(pts);
  std::string tip = dir == ConeDirection::Source ? "v" : "v";
  return cone_over(base, fresh_against(avoid, tip), dir == ConeDirection::Source ? 1 : 0);
}

}  // namespace

SeparationResult separate_source_sink(const CatPtr& C, const std::vector<int>& ys,
                                      ConeDirection dir, int bound) {
  SeparationResult r;
  int n = static_cast<int>(ys.size());
  r.cone = attach_cone(C, ys, dir, bound);
  ConeOverResult cone_n = free_cone_n(n, C->objects, dir);
  std::vector<int> xs_in_cone;
  for (int k = 0; k < n; ++k) xs_in_cone.push_back(k);  // discrete base objects come first
  std::vector<std::string> e_names;
  for (int k = 0; k < n; ++k) e_names.push_back("e" + std::to_string(k + 1));
  r.glue = free_oriented_gluing(cone_n.cat, C, xs_in_cone, ys, e_names, bound);
  r.D = r.glue.A;
  r.j = r.glue.i2;
  r.j.name = dir == ConeDirection::Source ? "j-" : "j+";
  for (int k = 0; k < n; ++k) r.xs.push_back(r.glue.i1.ob[k]);
  r.tip = r.glue.i1.ob[cone_n.tip];
  r.sep_arrows = r.glue.beta;
  for (int k = 0; k < n; ++k) r.tip_arrows.push_back(r.glue.i1.mor[cone_n.tip_arrows[k]]);

  // u: D^± -> C^± contracts the edges x_i -> y_i
  std::vector<int> ob_img(r.D->objects.size(), -1);
  for (size_t o = 0; o < r.D->objects.size(); ++o) {
    auto [side, orig] = r.glue.ob_origin[o];
    if (side == 2) {
      ob_img[o] = r.cone.inclusion.ob[orig];
    } else if (orig == cone_n.tip) {
      ob_img[o] = r.cone.tip;
    } else {
      ob_img[o] = r.cone.inclusion.ob[ys[orig]];  // x_k -> y_k
    }
  }
  r.u = functor_on_gluing(
      r.glue, r.cone.cat, dir == ConeDirection::Source ? "u-" : "u+", ob_img,
      [&](int side, int mor) -> std::vector<int> {
        if (side == 2) return {r.cone.inclusion.mor[mor]};
        // cone_n morphisms: identities handled upstream (words have none);
        // the only non-identities are the tip arrows
        for (int k = 0; k < n; ++k)
          if (cone_n.tip_arrows[k] == mor) return {r.cone.cone_arrows[k]};
        throw std::logic_error("separate_source_sink: unexpected cone morphism");
      },
      [&](int) -> std::vector<int> { return {}; });  // e_k collapses to an identity
  return r;
}

SinkSliceAnalysis analyze_sink_slice(const SeparationResult& sep) {
  if (sep.cone.direction != ConeDirection::Sink)
    throw std::invalid_argument("analyze_sink_slice: expects the sink case");
  SinkSliceAnalysis an;
  an.slice = slice(sep.u, sep.cone.tip, SliceSide::Under);
  const auto& Cp = *sep.cone.cat;
  an.object_class.assign(an.slice.objects.size(), 0);
  an.classes_exhaustive = true;

  std::set<int> xset(sep.xs.begin(), sep.xs.end());
  std::map<int, int> x_index;
  for (size_t k = 0; k < sep.xs.size(); ++k) x_index[sep.xs[k]] = static_cast<int>(k);

  for (size_t i = 0; i < an.slice.objects.size(); ++i) {
    auto [d, gmor] = an.slice.objects[i];
    int cls = 0;
    if (d == sep.tip) {
      if (Cp.is_identity(gmor)) cls = 1;
    } else if (xset.count(d)) {
      // g: y_k -> w in C^+; standard factorization (j, h, id)
      auto fac = standard_factorization(sep.cone.glue, gmor);
      bool h_id = sep.cone.glue.A1->is_identity(fac.f1);
      int k = x_index[d];
      if (h_id && fac.k == k)
        cls = 2;
      else if (!h_id)
        cls = 5;
    } else {
      auto fac = standard_factorization(sep.cone.glue, gmor);
      bool h_id = sep.cone.glue.A1->is_identity(fac.f1);
      if (h_id)
        cls = 3;
      else
        cls = 4;
    }
    if (cls == 0) an.classes_exhaustive = false;
    an.object_class[i] = cls;
  }

  std::vector<int> h_objs, hp_objs;
  for (size_t i = 0; i < an.slice.objects.size(); ++i) {
    if (an.object_class[i] >= 1 && an.object_class[i] <= 3) {
      h_objs.push_back(static_cast<int>(i));
      an.h_class.push_back(an.object_class[i]);
    }
    if (an.object_class[i] == 1 || an.object_class[i] == 2) hp_objs.push_back(static_cast<int>(i));
  }
  an.H = full_subcategory(an.slice.cat, h_objs, "H");
  an.Hprime = full_subcategory(an.slice.cat, hp_objs, "H'");
  return an;
}

// ---------------------------------------------------------------- cubes

int TuplePower::object_of(const std::vector<int>& t) const {
  for (size_t i = 0; i < obj_tuple.size(); ++i)
    if (obj_tuple[i] == t) return static_cast<int>(i);
  return -1;
}
int TuplePower::mor_of(const std::vector<int>& t) const {
  for (size_t i = 0; i < mor_tuple.size(); ++i)
    if (mor_tuple[i] == t) return static_cast<int>(i);
  return -1;
}

TuplePower tuple_power(const CatPtr& c, int n) {
  if (n < 1) throw std::invalid_argument("tuple_power: n >= 1");
  TuplePower p;
  auto cat = std::make_shared<FinCategory>();
  cat->name = c->name + "^" + std::to_string(n);
  int nob = static_cast<int>(c->objects.size());
  int nmor = static_cast<int>(c->mors.size());
  // enumerate object tuples
  std::vector<int> tup(n, 0);
  auto tuple_name = [&](const std::vector<int>& t, bool is_mor) {
    std::string s = "(";
    for (int i = 0; i < n; ++i) {
      s += is_mor ? c->mors[t[i]].name : c->objects[t[i]];
      if (i + 1 < n) s += ",";
    }
    return s + ")";
  };
  for (;;) {
    p.obj_tuple.push_back(tup);
    cat->objects.push_back(tuple_name(tup, false));
    int i = n - 1;
    while (i >= 0 && tup[i] == nob - 1) tup[i--] = 0;
    if (i < 0) break;
    tup[i]++;
  }
  std::map<std::vector<int>, int> ob_idx, mor_idx;
  for (size_t i = 0; i < p.obj_tuple.size(); ++i) ob_idx[p.obj_tuple[i]] = static_cast<int>(i);
  cat->identity.assign(p.obj_tuple.size(), -1);
  tup.assign(n, 0);
  for (;;) {
    p.mor_tuple.push_back(tup);
    std::vector<int> st(n), tt(n);
    bool all_id = true;
    for (int i = 0; i < n; ++i) {
      st[i] = c->mors[tup[i]].src;
      tt[i] = c->mors[tup[i]].tgt;
      if (!c->is_identity(tup[i])) all_id = false;
    }
    int idx = static_cast<int>(cat->mors.size());
    mor_idx[tup] = idx;
    cat->mors.push_back({tuple_name(tup, true), ob_idx[st], ob_idx[tt]});
    if (all_id) cat->identity[ob_idx[st]] = idx;
    int i = n - 1;
    while (i >= 0 && tup[i] == nmor - 1) tup[i--] = 0;
    if (i < 0) break;
    tup[i]++;
  }
  for (size_t f = 0; f < p.mor_tuple.size(); ++f)
    for (size_t g = 0; g < p.mor_tuple.size(); ++g) {
      std::vector<int> comp(n);
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        comp[i] = c->compose(p.mor_tuple[g][i], p.mor_tuple[f][i]);
        if (comp[i] < 0) ok = false;
      }
      if (ok) cat->set_composite(static_cast<int>(g), static_cast<int>(f), mor_idx[comp]);
    }
  for (int gmor : c->generators)
    for (int pos = 0; pos < n; ++pos) {
      // generator in one coordinate, identities elsewhere: one per object tuple of the rest
      for (size_t o = 0; o < p.obj_tuple.size(); ++o) {
        std::vector<int> t(n);
        bool ok = true;
        for (int i = 0; i < n; ++i) {
          if (i == pos)
            t[i] = gmor;
          else
            t[i] = c->identity[p.obj_tuple[o][i]];
        }
        if (p.obj_tuple[o][pos] != c->mors[gmor].src) ok = false;
        if (ok) cat->generators.push_back(mor_idx[t]);
      }
    }
  std::sort(cat->generators.begin(), cat->generators.end());
  cat->generators.erase(std::unique(cat->generators.begin(), cat->generators.end()),
                        cat->generators.end());
  cat->finalize();
  p.cat = cat;
  return p;
}

SubcategoryResult cube_truncation_geq(const TuplePower& unit_cube, int k) {
  std::vector<int> objs;
  for (size_t o = 0; o < unit_cube.obj_tuple.size(); ++o) {
    int sum = 0;
    for (int x : unit_cube.obj_tuple[o]) sum += x;
    if (sum >= k) objs.push_back(static_cast<int>(o));
  }
  return full_subcategory(unit_cube.cat, objs, "[1]^n_{>=" + std::to_string(k) + "}");
}

SubcategoryResult cube_truncation_eq(const TuplePower& unit_cube, int k) {
  std::vector<int> objs;
  for (size_t o = 0; o < unit_cube.obj_tuple.size(); ++o) {
    int sum = 0;
    for (int x : unit_cube.obj_tuple[o]) sum += x;
    if (sum == k) objs.push_back(static_cast<int>(o));
  }
  return full_subcategory(unit_cube.cat, objs, "[1]^n_{=" + std::to_string(k) + "}");
}

CubeShapes cube_shapes(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("cube_shapes: 1 <= n <= 4");
  CubeShapes cs;
  cs.n = n;
  cs.unit_cube = tuple_power(chain_category(2), n);
  cs.two_cube = tuple_power(chain_category(3), n);
  cs.eq_top = cube_truncation_eq(cs.unit_cube, n - 1);
  cs.geq_top = cube_truncation_geq(cs.unit_cube, n - 1);

  // I: the convex hull [1,2]^n plus the n corners (0,2,...,2), ..., (2,...,2,0)
  std::vector<int> i_objs;
  for (size_t o = 0; o < cs.two_cube.obj_tuple.size(); ++o) {
    const auto& t = cs.two_cube.obj_tuple[o];
    bool hull = true;
    for (int x : t)
      if (x < 1) hull = false;
    int zeros = 0, twos = 0;
    for (int x : t) {
      if (x == 0) ++zeros;
      if (x == 2) ++twos;
    }
    bool corner = zeros == 1 && twos == n - 1;
    if (hull || corner) i_objs.push_back(static_cast<int>(o));
  }
  cs.corner_I = full_subcategory(cs.two_cube.cat, i_objs, "I");

  // inclusions
  std::vector<int> ob1;
  for (size_t o = 0; o < cs.eq_top.cat->objects.size(); ++o) {
    int in_unit = cs.eq_top.inclusion.ob[o];
    ob1.push_back(cs.geq_top.cat->object_index(cs.unit_cube.cat->objects[in_unit]));
  }
  cs.i1 = thin_functor(cs.eq_top.cat, cs.geq_top.cat, ob1, "i1");
  cs.i2 = cs.geq_top.inclusion;
  cs.i2.name = "i2";
  // i3: [1]^n -> I via the shift o |-> o + 1
  std::vector<int> ob3;
  for (size_t o = 0; o < cs.unit_cube.obj_tuple.size(); ++o) {
    std::vector<int> t = cs.unit_cube.obj_tuple[o];
    for (int& x : t) x += 1;
    int in_two = cs.two_cube.object_of(t);
    int in_I = -1;
    for (size_t j = 0; j < cs.corner_I.cat->objects.size(); ++j)
      if (cs.corner_I.inclusion.ob[j] == in_two) in_I = static_cast<int>(j);
    ob3.push_back(in_I);
  }
  cs.i3 = thin_functor(cs.unit_cube.cat, cs.corner_I.cat, ob3, "i3");
  cs.i4 = cs.corner_I.inclusion;
  cs.i4.name = "i4";
  return cs;
}

// ---------------------------------------------------------------- R and friends

CatPtr frozen_R_table() {
  auto c = std::make_shared<FinCategory>();
  c->name = "R";
  c->objects = {"0", "1", "2"};
  // order matches the saturation BFS of the standard presentation
  c->mors = {{"id_0", 0, 0}, {"id_1", 1, 1}, {"id_2", 2, 2}, {"al", 0, 1},      {"be", 1, 2},
             {"ga", 2, 0},   {"be.al", 0, 2}, {"ga.be", 1, 0}, {"al.ga", 2, 1}, {"al.ga.be", 1, 1}};
  c->identity = {0, 1, 2};
  const int E = 9;  // the idempotent al.ga.be
  auto pick = [&](int a, int b) -> int {
    // unique non-identity choice for every hom-set except Hom(1,1), where all
    // non-trivial composites land on the idempotent
    if (a == 1 && b == 1) return E;
    if (a == b) return c->identity[a];
    for (size_t m = 0; m < c->mors.size(); ++m)
      if (c->mors[m].src == a && c->mors[m].tgt == b) return static_cast<int>(m);
    return -1;
  };
  for (size_t f = 0; f < c->mors.size(); ++f)
    for (size_t g = 0; g < c->mors.size(); ++g) {
      if (c->mors[f].tgt != c->mors[g].src) continue;
      int res;
      if (c->is_identity(static_cast<int>(f)))
        res = static_cast<int>(g);
      else if (c->is_identity(static_cast<int>(g)))
        res = static_cast<int>(f);
      else
        res = pick(c->mors[f].src, c->mors[g].tgt);
      c->set_composite(static_cast<int>(g), static_cast<int>(f), res);
    }
  c->generators = {3, 4, 5};
  c->finalize();
  if (auto e = c->verify(); !e.empty()) throw std::logic_error("frozen_R_table: " + e);
  return c;
}

InvertibleShapes invertible_shapes(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("invertible_shapes: 1 <= n <= 3");
  InvertibleShapes inv;
  PresentedCategory pres;
  pres.quiver.vertices = {"0", "1", "2"};
  pres.quiver.arrows = {{"al", 0, 1}, {"be", 1, 2}, {"ga", 2, 0}};
  pres.relations.push_back({QPath{0, {0, 1, 2}, 0}, QPath{0, {}, 0}});  // ga.be.al = id_0
  pres.relations.push_back({QPath{2, {2, 0, 1}, 2}, QPath{2, {}, 2}});  // be.al.ga = id_2
  inv.R_oracle = saturate(pres, 8);
  if (!inv.R_oracle.cat) throw std::logic_error("invertible_shapes: R saturation did not close");
  inv.R = inv.R_oracle.cat;
  inv.Rn = tuple_power(inv.R, n);
  inv.two_cube = tuple_power(chain_category(3), n);
  inv.idempotent = -1;
  for (int m : inv.R->hom(1, 1))
    if (!inv.R->is_identity(m)) inv.idempotent = m;

  // q1: [2] -> R
  CatPtr two = chain_category(3);
  std::vector<int> q1_ob = {0, 1, 2};
  std::vector<int> q1_mor(two->mors.size(), -1);
  for (size_t m = 0; m < two->mors.size(); ++m) {
    int a = two->mors[m].src, b = two->mors[m].tgt;
    if (a == b)
      q1_mor[m] = inv.R->identity[a];
    else if (a == 0 && b == 1)
      q1_mor[m] = inv.R->mor_index("al");
    else if (a == 1 && b == 2)
      q1_mor[m] = inv.R->mor_index("be");
    else
      q1_mor[m] = inv.R->mor_index("be.al");
  }
  inv.q.name = "q";
  inv.q.dom = inv.two_cube.cat;
  inv.q.cod = inv.Rn.cat;
  for (auto& t : inv.two_cube.obj_tuple) {
    std::vector<int> img(t.size());
    for (size_t i = 0; i < t.size(); ++i) img[i] = q1_ob[t[i]];
    inv.q.ob.push_back(inv.Rn.object_of(img));
  }
  for (auto& t : inv.two_cube.mor_tuple) {
    std::vector<int> img(t.size());
    for (size_t i = 0; i < t.size(); ++i) img[i] = q1_mor[t[i]];
    inv.q.mor.push_back(inv.Rn.mor_of(img));
  }
  if (auto rep = check_functor(inv.q); !rep.ok)
    throw std::logic_error("invertible_shapes: q is not a functor: " + rep.issue);
  return inv;
}
// ---------------------------------------------------------------- reflection chain

namespace {

// unique poset morphism between two objects of a thin category
int thin_mor(const CatPtr& c, int a, int b) {
  const auto& h = c->hom(a, b);
  if (h.size() != 1) throw std::logic_error("thin_mor: hom-set is not a singleton");
  return h[0];
}

std::vector<int> singleton_tuple(int n, int k, int fill, int at_k) {
  std::vector<int> t(n, fill);
  t[k] = at_k;
  return t;
}

struct SideChain {
  std::vector<GluingResult> glued;  // D, A1, A2, A3, E1
  std::vector<FunctorMap> j;
  AmalgamResult push_I1, push_I2;
  MaterializedAmalgam MI1, MI2;
  FunctorMap cube_to_I2;  // [2]^n -> I2
  int tip_in_I2 = -1;
  std::vector<int> marked_I2;
  ConeOverResult S3;
  SubcategoryResult Ishape;
};

// Cone chain over the cube inclusions, each stage glued to C. dir_source = 1
// gives the minus side (source cones, marked objects (2,..,1_k,..,2) through
// the shifted embedding); dir_source = 0 the plus side (sink cones, marked
// objects (0,..,1_k,..,0), identity-range embedding).
SideChain build_side_chain(const CatPtr& C, const std::vector<int>& ys, const CubeShapes& cubes,
                           const SeparationResult& sep, int dir_source, int bound) {
  int n = cubes.n;
  SideChain sc;
  std::vector<std::string> e_names;
  for (int k = 0; k < n; ++k) e_names.push_back("e" + std::to_string(k + 1));

  // cube truncation next to the marked layer
  std::vector<int> trunc_objs;
  for (size_t o = 0; o < cubes.unit_cube.obj_tuple.size(); ++o) {
    int sum = 0;
    for (int x : cubes.unit_cube.obj_tuple[o]) sum += x;
    if (dir_source ? sum >= n - 1 : sum <= 1) trunc_objs.push_back(static_cast<int>(o));
  }
  SubcategoryResult trunc = full_subcategory(cubes.unit_cube.cat, trunc_objs,
                                             dir_source ? "[1]^n_{>=n-1}" : "[1]^n_{<=1}");

  auto unit_marked = [&](int k) {
    return cubes.unit_cube.object_of(dir_source ? singleton_tuple(n, k, 1, 0)
                                                : singleton_tuple(n, k, 0, 1));
  };
  auto two_marked = [&](int k) {
    return cubes.two_cube.object_of(dir_source ? singleton_tuple(n, k, 2, 1)
                                               : singleton_tuple(n, k, 0, 1));
  };

  // I-shape: convex hull of the embedded cube plus the n corners
  std::vector<int> i_objs;
  for (size_t o = 0; o < cubes.two_cube.obj_tuple.size(); ++o) {
    const auto& t = cubes.two_cube.obj_tuple[o];
    bool hull = true;
    int odd = 0, deep = 0;
    for (int x : t) {
      if (dir_source ? x < 1 : x > 1) hull = false;
      if (x == (dir_source ? 0 : 2)) ++odd;
      if (x == (dir_source ? 2 : 0)) ++deep;
    }
    bool corner = odd == 1 && deep == n - 1;
    if (hull || corner) i_objs.push_back(static_cast<int>(o));
  }
  sc.Ishape = full_subcategory(cubes.two_cube.cat, i_objs, dir_source ? "I" : "I'");

  // unit cube -> I (shift by +1 on the minus side)
  std::vector<int> unit_to_I(cubes.unit_cube.obj_tuple.size());
  for (size_t o = 0; o < cubes.unit_cube.obj_tuple.size(); ++o) {
    std::vector<int> t = cubes.unit_cube.obj_tuple[o];
    if (dir_source)
      for (int& x : t) x += 1;
    int in_two = cubes.two_cube.object_of(t);
    int in_I = -1;
    for (size_t j2 = 0; j2 < sc.Ishape.cat->objects.size(); ++j2)
      if (sc.Ishape.inclusion.ob[j2] == in_two) in_I = static_cast<int>(j2);
    unit_to_I[o] = in_I;
  }
  FunctorMap i3 = thin_functor(cubes.unit_cube.cat, sc.Ishape.cat, unit_to_I, "i3");

  ConeOverResult S2 = cone_over(trunc.cat, "v", dir_source);
  sc.S3 = cone_over(cubes.unit_cube.cat, "v", dir_source);

  Span spanI1;
  spanI1.W = cubes.unit_cube.cat;
  spanI1.X = sc.S3.cat;
  spanI1.Y = sc.Ishape.cat;
  spanI1.fX = sc.S3.inclusion;
  spanI1.fY = i3;
  sc.push_I1 = pushout(spanI1);
  auto out1 = materialize(sc.push_I1, bound);
  if (!out1.amalgam) throw std::runtime_error("reflection chain: I1 exceeded the bound");
  sc.MI1 = *out1.amalgam;

  Span spanI2;
  spanI2.W = sc.Ishape.cat;
  spanI2.X = sc.MI1.Z;
  spanI2.Y = cubes.two_cube.cat;
  spanI2.fX = sc.MI1.gY;
  spanI2.fY = sc.Ishape.inclusion;
  sc.push_I2 = pushout(spanI2);
  auto out2 = materialize(sc.push_I2, bound);
  if (!out2.amalgam) throw std::runtime_error("reflection chain: I2 exceeded the bound");
  sc.MI2 = *out2.amalgam;
  sc.cube_to_I2 = sc.MI2.gY;
  sc.tip_in_I2 = sc.MI2.gX.ob[sc.MI1.gX.ob[sc.S3.tip]];
  for (int k = 0; k < n; ++k) sc.marked_I2.push_back(sc.MI2.gY.ob[two_marked(k)]);

  sc.glued.push_back(sep.glue);
  std::vector<int> marked2, marked3;
  for (int k = 0; k < n; ++k) {
    int u = unit_marked(k);
    int in_trunc = -1;
    for (size_t j2 = 0; j2 < trunc.cat->objects.size(); ++j2)
      if (trunc.inclusion.ob[j2] == u) in_trunc = static_cast<int>(j2);
    marked2.push_back(in_trunc);
    marked3.push_back(u);
  }
  sc.glued.push_back(free_oriented_gluing(S2.cat, C, marked2, ys, e_names, bound));
  sc.glued.push_back(free_oriented_gluing(sc.S3.cat, C, marked3, ys, e_names, bound));
  std::vector<int> markedI1;
  for (int k = 0; k < n; ++k) markedI1.push_back(sc.MI1.gY.ob[unit_to_I[marked3[k]]]);
  sc.glued.push_back(free_oriented_gluing(sc.MI1.Z, C, markedI1, ys, e_names, bound));
  sc.glued.push_back(free_oriented_gluing(sc.MI2.Z, C, sc.marked_I2, ys, e_names, bound));

  int tip1 = static_cast<int>(sep.glue.A1->objects.size()) - 1;  // cone tip comes last
  std::vector<int> s1_ob(sep.glue.A1->objects.size());
  for (int k = 0; k < n; ++k) s1_ob[k] = marked2[k];
  s1_ob[tip1] = S2.tip;
  FunctorMap sigma1 = thin_functor(sep.glue.A1, S2.cat, s1_ob, "sigma1");
  std::vector<int> s2_ob(S2.cat->objects.size());
  for (size_t o = 0; o < trunc.cat->objects.size(); ++o) s2_ob[o] = trunc.inclusion.ob[o];
  s2_ob[S2.tip] = sc.S3.tip;
  FunctorMap sigma2 = thin_functor(S2.cat, sc.S3.cat, s2_ob, "sigma2");
  sc.j.push_back(induced_gluing_functor(sc.glued[0], sc.glued[1], sigma1, "j1"));
  sc.j.push_back(induced_gluing_functor(sc.glued[1], sc.glued[2], sigma2, "j2"));
  sc.j.push_back(induced_gluing_functor(sc.glued[2], sc.glued[3], sc.MI1.gX, "j3"));
  sc.j.push_back(induced_gluing_functor(sc.glued[3], sc.glued[4], sc.MI2.gX, "j4"));
  return sc;
}

// Collapses I2 onto the one-point extension of R^n through q.
FunctorMap collapse_I2_to_B1(const SideChain& sc, const CubeShapes& cubes,
                             const InvertibleShapes& inv, const GluingResult& B1,
                             int dir_source) {
  const CatPtr& I2 = sc.MI2.Z;
  const CatPtr& target = B1.A;
  int tip_in_B1 = dir_source ? B1.i1.ob[0] : B1.i2.ob[0];
  const FunctorMap& rn_in_B1 = dir_source ? B1.i2 : B1.i1;
  int n = cubes.n;
  int center = cubes.two_cube.object_of(std::vector<int>(n, 1));

  std::vector<int> ob(I2->objects.size(), -1);
  for (size_t o = 0; o < cubes.two_cube.cat->objects.size(); ++o)
    ob[sc.MI2.gY.ob[o]] = rn_in_B1.ob[inv.q.ob[o]];
  ob[sc.tip_in_I2] = tip_in_B1;
  for (int x : ob)
    if (x < 0) throw std::logic_error("collapse_I2_to_B1: uncovered object");

  auto img_cube = [&](int m) { return rn_in_B1.mor[inv.q.mor[m]]; };
  auto img_S3 = [&](int m, std::vector<int>& path) {
    int base_count = static_cast<int>(cubes.unit_cube.cat->mors.size());
    if (m < base_count) {
      std::vector<int> a = cubes.unit_cube.obj_tuple[cubes.unit_cube.cat->mors[m].src];
      std::vector<int> b = cubes.unit_cube.obj_tuple[cubes.unit_cube.cat->mors[m].tgt];
      if (dir_source) {
        for (int& x : a) x += 1;
        for (int& x : b) x += 1;
      }
      path.push_back(img_cube(
          thin_mor(cubes.two_cube.cat, cubes.two_cube.object_of(a), cubes.two_cube.object_of(b))));
      return;
    }
    int o = -1;
    for (size_t k = 0; k < sc.S3.tip_arrows.size(); ++k)
      if (sc.S3.tip_arrows[k] == m) o = static_cast<int>(k);
    if (o < 0) throw std::logic_error("collapse_I2_to_B1: unexpected cone morphism");
    std::vector<int> t = cubes.unit_cube.obj_tuple[o];
    if (dir_source)
      for (int& x : t) x += 1;
    int emb = cubes.two_cube.object_of(t);
    if (dir_source) {
      path.push_back(B1.beta[0]);  // v -> center
      path.push_back(img_cube(thin_mor(cubes.two_cube.cat, center, emb)));
    } else {
      path.push_back(img_cube(thin_mor(cubes.two_cube.cat, emb, center)));
      path.push_back(B1.beta[0]);  // center -> w
    }
  };

  FunctorMap f;
  f.name = dir_source ? "rho-" : "rho+";
  f.dom = I2;
  f.cod = target;
  f.ob = ob;
  for (size_t m = 0; m < I2->mors.size(); ++m) {
    std::vector<int> path;
    for (auto& e : sc.MI2.words[m].entries) {
      if (e.leg == 1) {
        path.push_back(img_cube(e.mor));
        continue;
      }
      for (auto& e1 : sc.MI1.words[e.mor].entries) {
        if (e1.leg == 0)
          img_S3(e1.mor, path);
        else
          path.push_back(img_cube(sc.Ishape.inclusion.mor[e1.mor]));
      }
    }
    f.mor.push_back(target->compose_path(path, ob[I2->mors[m].src]));
  }
  if (auto rep = check_functor(f); !rep.ok)
    throw std::logic_error("collapse_I2_to_B1: " + rep.issue);
  return f;
}

// the object-flipping automorphism of R (0 <-> 2)
FunctorMap flip_R(const CatPtr& R) {
  std::vector<int> ob = {2, 1, 0};
  std::map<int, int> gens;
  gens[R->mor_index("al")] = R->hom(2, 1)[0];
  gens[R->mor_index("be")] = R->hom(1, 0)[0];
  gens[R->mor_index("ga")] = R->hom(0, 2)[0];
  return functor_from_generators(R, R, ob, gens, "flip");
}

}  // namespace

ReflectionShapes reflection_chain_shapes(const CatPtr& C, const std::vector<int>& ys, int bound) {
  int n = static_cast<int>(ys.size());
  if (n < 2 || n > 3)
    throw std::invalid_argument("reflection_chain_shapes: 2 <= n <= 3 at desk scale");
  ReflectionShapes rs;
  rs.n = n;
  rs.cubes = cube_shapes(n);
  rs.inv = invertible_shapes(n);
  rs.sep_minus = separate_source_sink(C, ys, ConeDirection::Source, bound);
  rs.sep_plus = separate_source_sink(C, ys, ConeDirection::Sink, bound);

  std::vector<std::string> e_names;
  for (int k = 0; k < n; ++k) e_names.push_back("e" + std::to_string(k + 1));
  int center_R = rs.inv.Rn.object_of(std::vector<int>(n, 1));
  auto marked_R = [&](int k, int dir_source) {
    return rs.inv.Rn.object_of(dir_source ? singleton_tuple(n, k, 2, 1)
                                          : singleton_tuple(n, k, 0, 1));
  };
  TuplePower square = tuple_power(chain_category(2), 2);

  // ---------------- minus side
  SideChain scm = build_side_chain(C, ys, rs.cubes, rs.sep_minus, 1, bound);
  rs.minus_chain = scm.glued;
  rs.j_minus = scm.j;
  rs.auxiliary_pushouts.push_back(scm.push_I1);
  rs.auxiliary_pushouts.push_back(scm.push_I2);

  rs.B1m = free_oriented_gluing(point_category("v"), rs.inv.Rn.cat, {0}, {center_R}, {"c0"}, bound);
  std::vector<int> mRm;
  for (int k = 0; k < n; ++k) mRm.push_back(rs.B1m.i2.ob[marked_R(k, 1)]);
  rs.E2m = free_oriented_gluing(rs.B1m.A, C, mRm, ys, e_names, bound);
  FunctorMap rho_m = collapse_I2_to_B1(scm, rs.cubes, rs.inv, rs.B1m, 1);
  rs.r = induced_gluing_functor(rs.minus_chain[4], rs.E2m, rho_m, "r");
  rs.l_cube = compose_functors(rs.minus_chain[4].i1, scm.cube_to_I2);
  rs.l_cube.name = "l";
  rs.j_R = compose_functors(rs.E2m.i1, rs.B1m.i2);
  rs.j_R.name = "j";

  rs.B2m = free_oriented_gluing(rs.B1m.A, point_category("o"), {rs.B1m.i1.ob[0]}, {0}, {"c1"},
                                bound);
  {
    std::vector<int> ul = {square.object_of({0, 0}), square.object_of({1, 0}),
                           square.object_of({0, 1})};
    SubcategoryResult corner = full_subcategory(square.cat, ul, "corner<");
    Span spanB;
    spanB.W = corner.cat;
    spanB.X = rs.B2m.A;
    spanB.Y = square.cat;
    spanB.fY = corner.inclusion;
    spanB.fX.name = "corner";
    spanB.fX.dom = corner.cat;
    spanB.fX.cod = rs.B2m.A;
    spanB.fX.ob = {rs.B2m.i1.ob[rs.B1m.i1.ob[0]], rs.B2m.i1.ob[rs.B1m.i2.ob[center_R]],
                   rs.B2m.i2.ob[0]};
    spanB.fX.mor.assign(corner.cat->mors.size(), -1);
    for (size_t m = 0; m < corner.cat->mors.size(); ++m) {
      int a = corner.cat->mors[m].src, b = corner.cat->mors[m].tgt;
      if (a == b)
        spanB.fX.mor[m] = rs.B2m.A->identity[spanB.fX.ob[a]];
      else if (b == 1)
        spanB.fX.mor[m] = rs.B2m.i1.mor[rs.B1m.beta[0]];  // (0,0) -> (1,0): v -> center
      else
        spanB.fX.mor[m] = rs.B2m.beta[0];  // (0,0) -> (0,1): v -> o
    }
    if (auto rep = check_functor(spanB.fX); !rep.ok)
      throw std::logic_error("reflection chain: corner leg: " + rep.issue);
    AmalgamResult pushB = pushout(spanB);
    rs.auxiliary_pushouts.push_back(pushB);
    auto outB = materialize(pushB, bound);
    if (!outB.amalgam) throw std::runtime_error("reflection chain: B exceeded the bound");
    rs.MBm = *outB.amalgam;
  }
  std::vector<int> m_in_B2m, m_in_Bm;
  for (int k = 0; k < n; ++k) {
    m_in_B2m.push_back(rs.B2m.i1.ob[mRm[k]]);
    m_in_Bm.push_back(rs.MBm.gX.ob[m_in_B2m.back()]);
  }
  rs.F1 = free_oriented_gluing(rs.B2m.A, C, m_in_B2m, ys, e_names, bound);
  rs.F = free_oriented_gluing(rs.MBm.Z, C, m_in_Bm, ys, e_names, bound);
  rs.jF1 = induced_gluing_functor(rs.E2m, rs.F1, rs.B2m.i1, "jF1");
  rs.jF2 = induced_gluing_functor(rs.F1, rs.F, rs.MBm.gX, "jF2");
  rs.l_square = compose_functors(rs.F.i1, rs.MBm.gY);
  rs.l_square.name = "l";
  rs.m_R = compose_functors(rs.F.i1,
                            compose_functors(rs.MBm.gX, compose_functors(rs.B2m.i1, rs.B1m.i2)));
  rs.m_R.name = "m";

  // ---------------- plus side
  SideChain scp = build_side_chain(C, ys, rs.cubes, rs.sep_plus, 0, bound);
  rs.plus_chain = scp.glued;
  rs.j_plus = scp.j;
  rs.auxiliary_pushouts.push_back(scp.push_I1);
  rs.auxiliary_pushouts.push_back(scp.push_I2);

  rs.B1p = free_oriented_gluing(rs.inv.Rn.cat, point_category("w"), {center_R}, {0}, {"c0"}, bound);
  std::vector<int> mRp;
  for (int k = 0; k < n; ++k) mRp.push_back(rs.B1p.i1.ob[marked_R(k, 0)]);
  rs.E2p = free_oriented_gluing(rs.B1p.A, C, mRp, ys, e_names, bound);
  FunctorMap rho_p = collapse_I2_to_B1(scp, rs.cubes, rs.inv, rs.B1p, 0);
  rs.r_plus = induced_gluing_functor(rs.plus_chain[4], rs.E2p, rho_p, "r+");

  rs.B2p = free_oriented_gluing(point_category("o"), rs.B1p.A, {0}, {rs.B1p.i2.ob[0]}, {"c1"},
                                bound);
  {
    std::vector<int> lr = {square.object_of({1, 0}), square.object_of({0, 1}),
                           square.object_of({1, 1})};
    SubcategoryResult corner = full_subcategory(square.cat, lr, "corner>");
    Span spanB;
    spanB.W = corner.cat;
    spanB.X = rs.B2p.A;
    spanB.Y = square.cat;
    spanB.fY = corner.inclusion;
    spanB.fX.name = "corner+";
    spanB.fX.dom = corner.cat;
    spanB.fX.cod = rs.B2p.A;
    spanB.fX.ob = {rs.B2p.i2.ob[rs.B1p.i1.ob[center_R]], rs.B2p.i1.ob[0],
                   rs.B2p.i2.ob[rs.B1p.i2.ob[0]]};
    spanB.fX.mor.assign(corner.cat->mors.size(), -1);
    for (size_t m = 0; m < corner.cat->mors.size(); ++m) {
      int a = corner.cat->mors[m].src, b = corner.cat->mors[m].tgt;
      if (a == b)
        spanB.fX.mor[m] = rs.B2p.A->identity[spanB.fX.ob[a]];
      else if (a == 0)
        spanB.fX.mor[m] = rs.B2p.i2.mor[rs.B1p.beta[0]];  // (1,0) -> (1,1): center -> w
      else
        spanB.fX.mor[m] = rs.B2p.beta[0];  // (0,1) -> (1,1): o -> w
    }
    if (auto rep = check_functor(spanB.fX); !rep.ok)
      throw std::logic_error("reflection chain: corner leg (plus): " + rep.issue);
    AmalgamResult pushB = pushout(spanB);
    rs.auxiliary_pushouts.push_back(pushB);
    auto outB = materialize(pushB, bound);
    if (!outB.amalgam) throw std::runtime_error("reflection chain: B+ exceeded the bound");
    rs.MBp = *outB.amalgam;
  }
  std::vector<int> m_in_B2p, m_in_Bp;
  for (int k = 0; k < n; ++k) {
    m_in_B2p.push_back(rs.B2p.i2.ob[mRp[k]]);
    m_in_Bp.push_back(rs.MBp.gX.ob[m_in_B2p.back()]);
  }
  rs.F1p = free_oriented_gluing(rs.B2p.A, C, m_in_B2p, ys, e_names, bound);
  rs.Fp = free_oriented_gluing(rs.MBp.Z, C, m_in_Bp, ys, e_names, bound);

  // ---------------- the isomorphism F -> F^+
  // R-part through the coordinatewise flip automorphism; the cofiber square of
  // the minus side becomes the fiber square of the plus side.
  FunctorMap flip = flip_R(rs.inv.R);
  auto flip_ob = [&](int o) {
    std::vector<int> t = rs.inv.Rn.obj_tuple[o];
    for (int& x : t) x = flip.ob[x];
    return rs.inv.Rn.object_of(t);
  };
  auto flip_mor = [&](int m) {
    std::vector<int> t = rs.inv.Rn.mor_tuple[m];
    for (int& x : t) x = flip.mor[x];
    return rs.inv.Rn.mor_of(t);
  };
  // R^n -> B^+ and squares
  auto Rn_to_Bp_ob = [&](int o) { return rs.MBp.gX.ob[rs.B2p.i2.ob[rs.B1p.i1.ob[o]]]; };
  auto Rn_to_Bp_mor = [&](int m) { return rs.MBp.gX.mor[rs.B2p.i2.mor[rs.B1p.i1.mor[m]]]; };
  int sq00_10 = thin_mor(square.cat, square.object_of({0, 0}), square.object_of({1, 0}));
  int sq00_01 = thin_mor(square.cat, square.object_of({0, 0}), square.object_of({0, 1}));

  // total map tau: B -> B^+
  FunctorMap tau;
  tau.name = "tau";
  tau.dom = rs.MBm.Z;
  tau.cod = rs.MBp.Z;
  tau.ob.assign(rs.MBm.Z->objects.size(), -1);
  // objects of B: images of B2m (R^n part, v, o) plus the square corner (1,1)
  for (size_t o = 0; o < rs.inv.Rn.cat->objects.size(); ++o)
    tau.ob[rs.MBm.gX.ob[rs.B2m.i1.ob[rs.B1m.i2.ob[o]]]] = Rn_to_Bp_ob(flip_ob(static_cast<int>(o)));
  tau.ob[rs.MBm.gX.ob[rs.B2m.i1.ob[rs.B1m.i1.ob[0]]]] =
      rs.MBp.gY.ob[square.object_of({0, 0})];                                   // v -> fiber tip
  tau.ob[rs.MBm.gX.ob[rs.B2m.i2.ob[0]]] = rs.MBp.gX.ob[rs.B2p.i1.ob[0]];        // o -> o
  tau.ob[rs.MBm.gY.ob[square.object_of({1, 1})]] =
      rs.MBp.gX.ob[rs.B2p.i2.ob[rs.B1p.i2.ob[0]]];                              // z -> w
  for (int x : tau.ob)
    if (x < 0) throw std::logic_error("iso_F: uncovered object of B");

  auto img_B2m = [&](int m, std::vector<int>& path) {
    // B2m = gluing(B1m, point o); decode through its classification
    const auto& c = rs.B2m.cls[m];
    if (c.kind == GluingResult::Kind::In2) return;  // identity of o
    auto handle_B1m = [&](int mm) {
      const auto& c1 = rs.B1m.cls[mm];
      if (c1.kind == GluingResult::Kind::In1) return;  // identity of v
      if (c1.kind == GluingResult::Kind::In2) {
        path.push_back(Rn_to_Bp_mor(flip_mor(c1.m)));
        return;
      }
      // cross: v -> center -> x
      path.push_back(rs.MBp.gY.mor[sq00_10]);  // fiber tip -> center
      if (!rs.inv.Rn.cat->is_identity(c1.f2)) path.push_back(Rn_to_Bp_mor(flip_mor(c1.f2)));
    };
    if (c.kind == GluingResult::Kind::In1) {
      handle_B1m(c.m);
      return;
    }
    // cross in B2m: (v -> ... -> v) beta (o): f1 is a B1m endomorphism of v (identity)
    if (!rs.B1m.A->is_identity(c.f1)) handle_B1m(c.f1);
    path.push_back(rs.MBp.gY.mor[sq00_01]);  // fiber tip -> o
  };

  tau.mor.assign(rs.MBm.Z->mors.size(), -1);
  for (size_t m = 0; m < rs.MBm.Z->mors.size(); ++m) {
    std::vector<int> path;
    for (auto& e : rs.MBm.words[m].entries) {
      if (e.leg == 0) {
        img_B2m(e.mor, path);
      } else {
        // square morphism; the squares match corner for corner
        path.push_back(rs.MBp.gY.mor[e.mor]);
      }
    }
    tau.mor[m] = rs.MBp.Z->compose_path(path, tau.ob[rs.MBm.Z->mors[m].src]);
  }
  if (auto rep = check_functor(tau); !rep.ok) throw std::logic_error("iso_F: tau: " + rep.issue);

  std::vector<int> iso_ob(rs.F.A->objects.size(), -1);
  for (size_t o = 0; o < rs.F.A->objects.size(); ++o) {
    auto [side, orig] = rs.F.ob_origin[o];
    iso_ob[o] = side == 1 ? rs.Fp.i1.ob[tau.ob[orig]] : rs.Fp.i2.ob[orig];
  }
  rs.iso_F = functor_on_gluing(
      rs.F, rs.Fp.A, "isoF", iso_ob,
      [&](int side, int mor) -> std::vector<int> {
        return {side == 1 ? rs.Fp.i1.mor[tau.mor[mor]] : rs.Fp.i2.mor[mor]};
      },
      [&](int k) -> std::vector<int> { return {rs.Fp.beta[k]}; });
  // bijectivity makes it an isomorphism of categories
  {
    std::set<int> obs(rs.iso_F.ob.begin(), rs.iso_F.ob.end());
    std::set<int> ms(rs.iso_F.mor.begin(), rs.iso_F.mor.end());
    if (obs.size() != rs.Fp.A->objects.size() || ms.size() != rs.Fp.A->mors.size() ||
        rs.F.A->objects.size() != rs.Fp.A->objects.size() ||
        rs.F.A->mors.size() != rs.Fp.A->mors.size())
      throw std::logic_error("iso_F: not bijective");
  }
  return rs;
}

// ---------------------------------------------------------------- separation of objects

SeparateObjectsResult separate_objects(const CatPtr& C, const std::vector<int>& ys) {
  SeparateObjectsResult r;
  auto cat = std::make_shared<FinCategory>();
  cat->name = C->name + "~";
  int n = static_cast<int>(ys.size());
  // extended object list: originals then clones y_i~i
  std::vector<int> under;  // underlying C-object per new object
  for (size_t o = 0; o < C->objects.size(); ++o) {
    cat->objects.push_back(C->objects[o]);
    under.push_back(static_cast<int>(o));
  }
  for (int i = 0; i < n; ++i) {
    cat->objects.push_back(fresh_against(cat->objects, C->objects[ys[i]] + "~" + std::to_string(i + 1)));
    under.push_back(ys[i]);
    r.ytilde.push_back(static_cast<int>(C->objects.size()) + i);
  }
  int total = static_cast<int>(cat->objects.size());
  // morphisms: a copy of Hom_C(under(a), under(b)) for every pair (a, b)
  std::map<std::tuple<int, int, int>, int> idx;  // (a, b, base mor) -> index
  cat->identity.assign(total, -1);
  for (int a = 0; a < total; ++a)
    for (int b = 0; b < total; ++b)
      for (int m : C->hom(under[a], under[b])) {
        int i = static_cast<int>(cat->mors.size());
        idx[{a, b, m}] = i;
        bool plain = a < static_cast<int>(C->objects.size()) && b < static_cast<int>(C->objects.size());
        std::string nm = plain ? C->mors[m].name
                               : C->mors[m].name + "@" + cat->objects[a] + ">" + cat->objects[b];
        cat->mors.push_back({nm, a, b});
        if (a == b && C->identity[under[a]] == m) cat->identity[a] = i;
      }
  for (auto& [key_f, f] : idx)
    for (auto& [key_g, g] : idx) {
      auto [a, b, mf] = key_f;
      auto [b2, c2, mg] = key_g;
      if (b != b2) continue;
      cat->set_composite(g, f, idx.at({a, c2, C->compose(mg, mf)}));
    }
  cat->finalize();
  if (auto e = cat->verify(); !e.empty()) throw std::logic_error("separate_objects: " + e);
  r.cat = cat;
  r.p.name = "p";
  r.p.dom = cat;
  r.p.cod = C;
  r.p.ob = under;
  r.p.mor.assign(cat->mors.size(), -1);
  for (auto& [key, i] : idx) r.p.mor[i] = std::get<2>(key);
  if (auto rep = check_functor(r.p); !rep.ok) throw std::logic_error("separate_objects: p: " + rep.issue);
  return r;
}

}  // namespace reflekt
