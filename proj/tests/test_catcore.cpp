#include <doctest.h>

#include "reflekt/catcore.hpp"
#include "reflekt/glue.hpp"

using namespace reflekt;

namespace {

Quiver single_arrow() {
  Quiver q;
  q.vertices = {"1", "2"};
  q.arrows = {{"a", 0, 1}};
  return q;
}

Quiver a2_quiver() {
  Quiver q;
  q.vertices = {"0", "1", "2"};
  q.arrows = {{"a", 0, 1}, {"b", 1, 2}};
  return q;
}

Quiver loop_quiver() {
  Quiver q;
  q.vertices = {"x"};
  q.arrows = {{"l", 0, 0}};
  return q;
}

Quiver zn_quiver(int n) {
  Quiver q;
  for (int i = 1; i <= n; ++i) q.vertices.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) q.vertices.push_back("y" + std::to_string(i));
  q.vertices.push_back("v");
  for (int i = 0; i < n; ++i) {
    q.arrows.push_back({"g" + std::to_string(i + 1), i, n + i});
    q.arrows.push_back({"h" + std::to_string(i + 1), i, 2 * n});
  }
  return q;
}

}  // namespace

TEST_CASE("free category on one arrow has 3 morphisms") {
  auto sat = saturate(free_category(single_arrow()), 10);
  REQUIRE(sat.cat);
  CHECK(sat.cat->objects.size() == 2);
  CHECK(sat.cat->mors.size() == 3);
  CHECK(sat.cat->verify().empty());
}

TEST_CASE("free category on a loop is reported non-finite") {
  auto sat = saturate(free_category(loop_quiver()), 10);
  CHECK_FALSE(sat.cat);
  REQUIRE(sat.non_finite.has_value());
  CHECK(sat.non_finite->hom_src == "x");
  CHECK(sat.non_finite->hom_tgt == "x");

  auto sat4 = saturate(free_category(loop_quiver()), 4);
  CHECK_FALSE(sat4.cat);
  CHECK(sat4.non_finite->bound == 4);
}

TEST_CASE("Z_2 free category: 5 objects, 4 arrows, 9 morphisms") {
  auto sat = saturate(free_category(zn_quiver(2)), 16);
  REQUIRE(sat.cat);
  CHECK(sat.cat->objects.size() == 5);
  CHECK(sat.cat->generators.size() == 4);
  CHECK(sat.cat->mors.size() == 9);
}

TEST_CASE("free A2 path category is the poset [2]") {
  auto sat = saturate(free_category(a2_quiver()), 10);
  REQUIRE(sat.cat);
  CHECK(sat.cat->mors.size() == 6);
  CHECK(same_table(*sat.cat, *chain_category(3)) ==
        false);  // names differ (arrow names vs chain names)
  auto iso = find_isomorphism(sat.cat, chain_category(3));
  CHECK(iso.has_value());
}

TEST_CASE("check_functor accepts the identity and rejects bad endpoints") {
  auto sat = saturate(free_category(a2_quiver()), 10);
  REQUIRE(sat.cat);
  auto id = identity_functor(sat.cat);
  CHECK(check_functor(id).ok);

  FunctorMap bad = id;
  bad.mor[sat.arrow_mor[0]] = sat.cat->identity[0];  // a: 0->1 mapped to id_0
  auto rep = check_functor(bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.issue.find("a") != std::string::npos);
}

TEST_CASE("q: Z_n -> sink cone is a functor") {
  int n = 2;
  auto zn = saturate(free_category(zn_quiver(n)), 16);
  REQUIRE(zn.cat);
  // sink cone over n points via attach_cone of the discrete category
  auto disc = discrete_category({"p1", "p2"});
  auto cone = attach_cone(disc, {0, 1}, ConeDirection::Sink);
  std::vector<int> ob(zn.cat->objects.size());
  for (int i = 0; i < n; ++i) {
    ob[zn.cat->object_index("x" + std::to_string(i + 1))] = cone.inclusion.ob[i];
    ob[zn.cat->object_index("y" + std::to_string(i + 1))] = cone.inclusion.ob[i];
  }
  ob[zn.cat->object_index("v")] = cone.tip;
  std::map<int, int> gens;
  for (int i = 0; i < n; ++i) {
    gens[zn.arrow_mor[2 * i]] = cone.cat->identity[cone.inclusion.ob[i]];  // g_i
    gens[zn.arrow_mor[2 * i + 1]] = cone.cone_arrows[i];                   // h_i
  }
  auto q = functor_from_generators(zn.cat, cone.cat, ob, gens, "q");
  CHECK(check_functor(q).ok);
}

TEST_CASE("slice of the identity on the terminal category") {
  auto one = terminal_category();
  auto u = identity_functor(one);
  auto s = slice(u, 0, SliceSide::Under);
  CHECK(s.cat->objects.size() == 1);
  CHECK(s.cat->mors.size() == 1);
}

TEST_CASE("products and opposites") {
  auto two = chain_category(2);  // [1]
  auto sq = product_category(two, two);
  CHECK(sq.cat->objects.size() == 4);
  CHECK(sq.cat->mors.size() == 9);
  CHECK(sq.cat->verify().empty());

  auto R = frozen_R_table();
  auto RR = product_category(R, R);
  CHECK(RR.cat->objects.size() == 9);
  int o11 = RR.object_of(1, 1);
  CHECK(RR.cat->hom(o11, o11).size() == 4);

  // opposite of the source cone (n=2) is the sink cone
  auto disc = discrete_category({"p1", "p2"});
  auto src = attach_cone(disc, {0, 1}, ConeDirection::Source);
  auto snk = attach_cone(disc, {0, 1}, ConeDirection::Sink);
  auto op = opposite_category(src.cat);
  CHECK(op->verify().empty());
  CHECK(find_isomorphism(op, snk.cat).has_value());
}

TEST_CASE("functor predicates: sieves and cosieves per the closure definition") {
  auto disc = discrete_category({"p1", "p2"});
  auto snk = attach_cone(disc, {0, 1}, ConeDirection::Sink);
  auto tip_incl = full_subcategory(snk.cat, {snk.tip}).inclusion;
  auto p = functor_predicates(tip_incl);
  CHECK(p.fully_faithful);
  // the terminal object receives morphisms from outside: closed under
  // postcomposition but not precomposition
  CHECK(p.cosieve);
  CHECK_FALSE(p.sieve);

  auto src = attach_cone(disc, {0, 1}, ConeDirection::Source);
  auto tip_incl2 = full_subcategory(src.cat, {src.tip}).inclusion;
  auto p2 = functor_predicates(tip_incl2);
  CHECK(p2.sieve);
  CHECK_FALSE(p2.cosieve);
}

TEST_CASE("find_adjoint: collapse is left adjoint to a terminal-point inclusion") {
  auto two = chain_category(2);  // 0 < 1, terminal object 1
  auto incl = full_subcategory(two, {1}).inclusion;
  auto adj = find_adjoint(incl, AdjointSide::Left);
  REQUIRE(adj.has_value());
  CHECK(adj->left.ob == std::vector<int>{0, 0});
  // and no right adjoint for the initial-point inclusion pattern
  auto incl0 = full_subcategory(two, {0}).inclusion;
  CHECK(find_adjoint(incl0, AdjointSide::Right).has_value());
  CHECK(find_adjoint(incl0, AdjointSide::Left).has_value() == false);
}

TEST_CASE("category verification catches broken tables") {
  auto c = std::make_shared<FinCategory>();
  c->objects = {"a"};
  c->mors = {{"id_a", 0, 0}, {"f", 0, 0}};
  c->identity = {0};
  c->set_composite(0, 0, 0);
  c->set_composite(0, 1, 1);
  c->set_composite(1, 0, 1);
  c->set_composite(1, 1, 0);  // f.f = id: fine (an involution), associativity holds
  c->finalize();
  CHECK(c->verify().empty());
  auto d = std::make_shared<FinCategory>();
  d->objects = {"a", "b"};
  d->mors = {{"id_a", 0, 0}, {"id_b", 1, 1}, {"f", 0, 1}, {"g", 0, 1}};
  d->identity = {0, 1};
  d->set_composite(0, 0, 0);
  d->set_composite(1, 1, 1);
  d->set_composite(2, 0, 2);
  d->set_composite(3, 0, 3);
  d->set_composite(1, 2, 3);  // id_b . f = g violates the unit law
  d->set_composite(1, 3, 3);
  d->finalize();
  CHECK_FALSE(d->verify().empty());
}
