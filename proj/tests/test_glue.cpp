#include <doctest.h>

#include <set>

#include "reflekt/glue.hpp"

using namespace reflekt;

namespace {

// the path category y1 -> y2
CatPtr a2_path() {
  auto c = chain_category(2);
  return c;
}

}  // namespace

TEST_CASE("one-point gluing of two terminal categories is [1]") {
  auto g = free_oriented_gluing(terminal_category(), terminal_category(), {0}, {0});
  CHECK(g.A->objects.size() == 2);
  CHECK(g.A->mors.size() == 3);
  CHECK(check_gluing_lemma(g).ok());
}

TEST_CASE("separated source over the point: shape and morphism count") {
  // D^- for C = 1, n = 2: cone v -> x1, x2 glued to the point
  auto sep = separate_source_sink(terminal_category(), {0, 0}, ConeDirection::Source);
  CHECK(sep.D->objects.size() == 4);  // v, x1, x2 and the point
  int nonid = 0, composites = 0;
  for (size_t m = 0; m < sep.D->mors.size(); ++m) {
    if (sep.D->is_identity(static_cast<int>(m))) continue;
    ++nonid;
    if (sep.glue.cls[m].kind == GluingResult::Kind::Cross &&
        !sep.glue.A1->is_identity(sep.glue.cls[m].f1))
      ++composites;
  }
  CHECK(nonid == 6);       // 4 generating arrows plus 2 composites
  CHECK(composites == 2);  // v -> x_k -> *
  CHECK(check_gluing_lemma(sep.glue).ok());
}

TEST_CASE("repeated targets: the two betas stay distinct") {
  auto g = free_oriented_gluing(discrete_category({"s1", "s2"}), terminal_category(), {0, 1},
                                {0, 0});
  CHECK(g.beta[0] != g.beta[1]);
  CHECK(g.A->objects.size() == 3);
  CHECK(check_gluing_lemma(g).ok());
}

TEST_CASE("standard factorizations") {
  // A1 = [1], A2 = [1], one beta from A1's target to A2's source
  auto g = free_oriented_gluing(chain_category(2), chain_category(2), {1}, {0});
  // beta itself factors as (k, id, id)
  auto fac = standard_factorization(g, g.beta[0]);
  CHECK(fac.k == 0);
  CHECK(g.A1->is_identity(fac.f1));
  CHECK(g.A2->is_identity(fac.f2));
  // i2(g) after beta
  int a2_arrow = g.A2->mor_index("0->1");
  int m = g.A->compose(g.i2.mor[a2_arrow], g.beta[0]);
  auto fac2 = standard_factorization(g, m);
  CHECK(fac2.k == 0);
  CHECK(g.A1->is_identity(fac2.f1));
  CHECK(fac2.f2 == a2_arrow);
  // a morphism within one leg has no standard factorization
  CHECK_THROWS(standard_factorization(g, g.i1.mor[g.A1->mor_index("0->1")]));
  CHECK(check_gluing_lemma(g).ok());
}

TEST_CASE("attach_cone: source over distinct and repeated objects") {
  auto disc = discrete_category({"y1", "y2"});
  auto cone = attach_cone(disc, {0, 1}, ConeDirection::Source);
  CHECK(cone.cat->objects.size() == 3);
  CHECK(cone.cat->mors.size() == 5);
  CHECK(functor_predicates(cone.inclusion).fully_faithful);

  auto rep = attach_cone(terminal_category(), {0, 0}, ConeDirection::Source);
  CHECK(rep.cat->objects.size() == 2);
  CHECK(rep.cat->hom(rep.tip, rep.inclusion.ob[0]).size() == 2);  // two parallel arrows
}

TEST_CASE("sink cone over the A2 path matches the three normal forms") {
  auto C = a2_path();
  auto cone = attach_cone(C, {0, 1}, ConeDirection::Sink);
  // objects y1, y2, w; morphisms: 3 identities, gamma, b1, b2, b2.gamma
  CHECK(cone.cat->objects.size() == 3);
  CHECK(cone.cat->mors.size() == 7);
  int gamma_cnt = 0, omega_cnt = 0, omega_gamma_cnt = 0;
  for (size_t m = 0; m < cone.cat->mors.size(); ++m) {
    if (cone.cat->is_identity(static_cast<int>(m))) continue;
    const auto& cls = cone.glue.cls[m];
    if (cls.kind == GluingResult::Kind::In1) {
      ++gamma_cnt;
    } else {
      REQUIRE(cls.kind == GluingResult::Kind::Cross);
      if (cone.glue.A1->is_identity(cls.f1))
        ++omega_cnt;
      else
        ++omega_gamma_cnt;
    }
  }
  CHECK(gamma_cnt == 1);
  CHECK(omega_cnt == 2);
  CHECK(omega_gamma_cnt == 1);
  CHECK(check_gluing_lemma(cone.glue).ok());
}

TEST_CASE("separated sink over the point: the free category on x->y, x->v") {
  auto sep = separate_source_sink(terminal_category(), {0}, ConeDirection::Sink);
  CHECK(sep.D->objects.size() == 3);
  CHECK(sep.D->mors.size() == 5);
  CHECK(check_functor(sep.u).ok);
  // u contracts x -> y: the separating edge maps to an identity
  CHECK(sep.cone.cat->is_identity(sep.u.mor[sep.sep_arrows[0]]));
  // and sends x -> v to the cone arrow
  CHECK(sep.u.mor[sep.tip_arrows[0]] == sep.cone.cone_arrows[0]);
}

TEST_CASE("u- has a fully faithful right adjoint fixing C and the tip") {
  auto C = a2_path();
  auto sep = separate_source_sink(C, {0, 1}, ConeDirection::Source);
  auto adj = find_adjoint(sep.u, AdjointSide::Right);
  REQUIRE(adj.has_value());
  auto& r = adj->right;
  CHECK(functor_predicates(r).fully_faithful);
  CHECK(r.ob[sep.cone.tip] == sep.tip);
  for (size_t c = 0; c < C->objects.size(); ++c)
    CHECK(r.ob[sep.cone.inclusion.ob[c]] == sep.j.ob[c]);
}

TEST_CASE("D+ normal forms follow the gamma/omega/gamma-omega pattern") {
  auto C = a2_path();
  auto sep = separate_source_sink(C, {0, 1}, ConeDirection::Sink);
  for (size_t m = 0; m < sep.D->mors.size(); ++m) {
    if (sep.D->is_identity(static_cast<int>(m))) continue;
    const auto& cls = sep.glue.cls[m];
    bool gamma = cls.kind == GluingResult::Kind::In2;
    bool omega = cls.kind == GluingResult::Kind::In1 ||
                 (cls.kind == GluingResult::Kind::Cross && sep.glue.A2->is_identity(cls.f2));
    bool gamma_omega =
        cls.kind == GluingResult::Kind::Cross && !sep.glue.A2->is_identity(cls.f2);
    CHECK((gamma || omega || gamma_omega));
  }
  // uniqueness of the expression = uniqueness of the standard factorization
  CHECK(check_gluing_lemma(sep.glue).ok());
}

TEST_CASE("sink slice analysis: five classes, H free on the Z_n quiver, adjoint") {
  auto C = a2_path();
  auto sep = separate_source_sink(C, {0, 1}, ConeDirection::Sink);
  auto an = analyze_sink_slice(sep);
  CHECK(an.classes_exhaustive);
  std::set<int> used(an.object_class.begin(), an.object_class.end());
  CHECK(used.count(1));
  CHECK(used.count(2));
  CHECK(used.count(3));
  CHECK(used.count(4));

  // H is the free category on the quiver with arrows x_i -> y_i, x_i -> v
  Quiver q;
  q.vertices = {"x1", "x2", "y1", "y2", "v"};
  q.arrows = {{"g1", 0, 2}, {"h1", 0, 4}, {"g2", 1, 3}, {"h2", 1, 4}};
  auto zn = saturate(free_category(q), 16);
  REQUIRE(zn.cat);
  CHECK(find_isomorphism(an.H.cat, zn.cat).has_value());

  // the inclusion H -> (u+/w) is a right adjoint: a left adjoint exists
  auto adj = find_adjoint(an.H.inclusion, AdjointSide::Left);
  CHECK(adj.has_value());
}

TEST_CASE("slice over a gluing is the coproduct of hom-sets up to the coreflection") {
  auto g = free_oriented_gluing(chain_category(2), chain_category(2), {1}, {0});
  // (i1 / i2(a2)) for a2 = target object of A2
  int a2 = g.i2.ob[1];
  auto s = slice(g.i1, a2, SliceSide::Under);
  // discrete subcategory of pairs (s_k, beta-composites) given by Hom_{A2}(t_k, a2)
  auto adj = find_adjoint(s.projection, AdjointSide::Left);
  (void)adj;  // the projection itself need not be an adjoint; the embedded
              // discrete category below is
  // objects of the slice: (a1, f); the coreflective subcategory is spanned by
  // pairs whose f is beta-led (f1 = id)
  std::vector<int> sub;
  for (size_t i = 0; i < s.objects.size(); ++i) {
    auto [a1, f] = s.objects[i];
    const auto& cls = g.cls[f];
    if (cls.kind == GluingResult::Kind::Cross && g.A1->is_identity(cls.f1))
      sub.push_back(static_cast<int>(i));
  }
  CHECK(sub.size() == g.A2->hom(g.t[0], 1).size());
  auto r = full_subcategory(s.cat, sub);
  auto radj = find_adjoint(r.inclusion, AdjointSide::Left);
  CHECK(radj.has_value());
}

TEST_CASE("cube shapes at n = 2 and 3") {
  auto cs2 = cube_shapes(2);
  CHECK(cs2.unit_cube.cat->objects.size() == 4);
  CHECK(cs2.unit_cube.cat->mors.size() == 9);
  CHECK(cs2.corner_I.cat->objects.size() == 6);  // [1,2]^2 plus two corners

  auto cs3 = cube_shapes(3);
  auto eq2 = cube_truncation_eq(cs3.unit_cube, 2);
  CHECK(eq2.cat->objects.size() == 3);
  CHECK(eq2.cat->mors.size() == 3);  // discrete
  CHECK(check_functor(cs3.i1).ok);
  CHECK(check_functor(cs3.i2).ok);
  CHECK(check_functor(cs3.i3).ok);
  CHECK(check_functor(cs3.i4).ok);
}

TEST_CASE("R: saturation oracle equals the frozen table") {
  auto inv = invertible_shapes(2);
  CHECK(inv.R->objects.size() == 3);
  CHECK(inv.R->hom(1, 1).size() == 2);
  CHECK(inv.R->hom(0, 1).size() == 1);
  REQUIRE(inv.idempotent >= 0);
  CHECK(inv.R->compose(inv.idempotent, inv.idempotent) == inv.idempotent);
  CHECK(inv.R->isomorphic_objects(0, 2));
  CHECK(same_table(*inv.R, *frozen_R_table()));
  CHECK(inv.R_oracle.rules_locally_confluent);

  // q sends the length-two morphism to an isomorphism
  auto two = chain_category(3);
  int long_mor = two->mor_index("0->2");
  // embed into [2]^n at the first coordinate, identities elsewhere
  std::vector<int> t = {long_mor, two->identity[0]};
  int m2 = inv.two_cube.mor_of(t);
  REQUIRE(m2 >= 0);
  CHECK(inv.Rn.cat->is_iso(inv.q.mor[m2]));
}

TEST_CASE("separate_objects: chaotic category and equivalence") {
  auto sep = separate_objects(terminal_category(), {0, 0});
  CHECK(sep.cat->objects.size() == 3);
  for (size_t a = 0; a < 3; ++a)
    for (size_t b = 0; b < 3; ++b)
      CHECK(sep.cat->hom(static_cast<int>(a), static_cast<int>(b)).size() == 1);
  CHECK(sep.ytilde[0] != sep.ytilde[1]);
  auto p = functor_predicates(sep.p);
  CHECK(p.fully_faithful);
  CHECK(p.essentially_surjective);
}

TEST_CASE("reflection chain shapes at n = 2 over the point") {
  auto rs = reflection_chain_shapes(terminal_category(), {0, 0}, 256);
  // E1^- contains an embedded [2]^2
  CHECK(check_functor(rs.l_cube).ok);
  auto pl = functor_predicates(rs.l_cube);
  CHECK(pl.faithful);
  CHECK(pl.injective_on_objects);
  // F contains an embedded square and an embedded R^n
  CHECK(check_functor(rs.l_square).ok);
  CHECK(check_functor(rs.m_R).ok);
  CHECK(functor_predicates(rs.m_R).faithful);
  // r restricts to q on the embedded cube: r . l_cube = j_R . q
  auto lhs = compose_functors(rs.r, rs.l_cube);
  auto rhs = compose_functors(rs.j_R, rs.inv.q);
  CHECK(lhs.ob == rhs.ob);
  CHECK(lhs.mor == rhs.mor);
  // every auxiliary pushout is an amalgamation
  for (auto& push : rs.auxiliary_pushouts) {
    auto rep = verify_amalgamation(push, 512);
    CHECK(rep.materialized);
    CHECK(rep.gx_faithful);
    CHECK(rep.gy_faithful);
    CHECK(rep.gx_3for2);
    CHECK(rep.gy_3for2);
  }
  // the two F's are isomorphic via the constructed functor
  CHECK(check_functor(rs.iso_F).ok);
  CHECK(rs.F.A->mors.size() == rs.Fp.A->mors.size());
}
