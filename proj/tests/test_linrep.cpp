#include <doctest.h>

#include "reflekt/glue.hpp"
#include "reflekt/field.hpp"
#include "reflekt/linrep.hpp"

using namespace reflekt;

namespace {

const Fp k5(5);

Rep<Fp> arrow_rep(const CatPtr& two, int dv, int dy, const Mat<Fp>& m) {
  std::map<int, Mat<Fp>> gens;
  gens[two->mor_index("0->1")] = m;
  return make_rep(k5, two, {dv, dy}, gens);
}

}  // namespace

TEST_CASE("make_rep enforces relations") {
  // poset square: going around both ways must agree
  auto sq = product_category(chain_category(2), chain_category(2));
  std::map<int, Mat<Fp>> gens;
  std::vector<int> dims(4, 1);
  Mat<Fp> one = mat_id(k5, 1);
  Mat<Fp> two_m(1, 1);
  two_m.at(0, 0) = 2;
  for (int g : sq.cat->generators) gens[g] = one;
  CHECK_NOTHROW(make_rep(k5, sq.cat, dims, gens));
  gens[sq.cat->generators[0]] = two_m;  // breaks commutativity of the square
  CHECK_THROWS(make_rep(k5, sq.cat, dims, gens));
}

TEST_CASE("hom spaces: identity, matrix case, one-way arrows") {
  auto two = chain_category(2);
  auto X = arrow_rep(two, 1, 1, mat_id(k5, 1));
  CHECK(hom_dim(X, X) == 1);

  auto one = terminal_category();
  Rep<Fp> A = make_rep(k5, one, {2}, {});
  Rep<Fp> B = make_rep(k5, one, {3}, {});
  CHECK(hom_dim(A, B) == 6);

  auto X2 = make_rep(k5, two, {1, 0}, {{two->mor_index("0->1"), Mat<Fp>(0, 1)}});
  auto Y2 = make_rep(k5, two, {0, 1}, {{two->mor_index("0->1"), Mat<Fp>(1, 0)}});
  CHECK(hom_dim(X2, Y2) == 0);
}

TEST_CASE("colimit: discrete bases, terminal objects, pushout corner") {
  auto disc = discrete_category({"a", "b"});
  Rep<Fp> X = make_rep(k5, disc, {1, 2}, {});
  CHECK(colimit(X).dim == 3);
  CHECK(limit(X).dim == 3);

  auto two = chain_category(2);
  Mat<Fp> m(1, 2);
  m.at(0, 0) = 1;
  m.at(0, 1) = 3;
  auto Y = arrow_rep(two, 2, 1, m);
  auto cc = colimit(Y);
  CHECK(cc.dim == 1);
  CHECK(is_invertible(k5, cc.inj[1]));  // canonical map from the terminal value

  // span k <- k -> k with identities: colim = k
  auto src = attach_cone(discrete_category({"l", "r"}), {0, 1}, ConeDirection::Source);
  std::map<int, Mat<Fp>> gens;
  gens[src.cone_arrows[0]] = mat_id(k5, 1);
  gens[src.cone_arrows[1]] = mat_id(k5, 1);
  Rep<Fp> S = make_rep(k5, src.cat, {1, 1, 1}, gens);
  CHECK(colimit(S).dim == 1);
  CHECK(colimit(S, true).dim == 1);
}

TEST_CASE("restriction along evaluation and identity") {
  auto two = chain_category(2);
  auto one = terminal_category();
  Mat<Fp> m(1, 1);
  m.at(0, 0) = 4;
  auto X = arrow_rep(two, 1, 1, m);
  FunctorMap ev;
  ev.name = "ev1";
  ev.dom = one;
  ev.cod = two;
  ev.ob = {1};
  ev.mor = {two->identity[1]};
  auto X1 = restrict_rep(ev, X);
  CHECK(X1.dim[0] == 1);
  auto Xid = restrict_rep(identity_functor(two), X);
  CHECK(mat_eq(k5, Xid.mat[two->mor_index("0->1")], m));
}

TEST_CASE("Kan extensions: fully faithful units, extension by zero") {
  auto two = chain_category(2);
  auto three = chain_category(3);
  auto u = thin_functor(two, three, {0, 1}, "u");
  auto X = direct_sum_rep(representable_rep(k5, two, 0), representable_rep(k5, two, 1));
  auto res = kan_extension(u, X, KanSide::Left);
  auto uLX = restrict_rep(u, res.ext);
  CHECK(is_natural_iso(X, uLX, res.canonical));

  auto incl0 = full_subcategory(three, {0}).inclusion;
  CHECK(functor_predicates(incl0).sieve);
  Rep<Fp> P = make_rep(k5, incl0.dom, {2}, {});
  auto r = kan_extension(incl0, P, KanSide::Right);
  CHECK(r.ext.dim[0] == 2);
  CHECK(r.ext.dim[1] == 0);
  CHECK(r.ext.dim[2] == 0);

  auto incl2 = full_subcategory(three, {2}).inclusion;
  CHECK(functor_predicates(incl2).cosieve);
  Rep<Fp> P2 = make_rep(k5, incl2.dom, {2}, {});
  auto l = kan_extension(incl2, P2, KanSide::Left);
  CHECK(l.ext.dim[2] == 2);
  CHECK(l.ext.dim[0] == 0);
  CHECK(l.ext.dim[1] == 0);
}

TEST_CASE("left and right Kan along the collapse of 2 points") {
  auto disc = discrete_category({"a", "b"});
  auto one = terminal_category();
  FunctorMap pi;
  pi.name = "pi";
  pi.dom = disc;
  pi.cod = one;
  pi.ob = {0, 0};
  pi.mor = {0, 0};
  Rep<Fp> X = make_rep(k5, disc, {1, 2}, {});
  CHECK(kan_extension(pi, X, KanSide::Left).ext.dim[0] == 3);
  CHECK(kan_extension(pi, X, KanSide::Right).ext.dim[0] == 3);
}

TEST_CASE("full adjunction verification on a small instance") {
  auto two = chain_category(2);
  auto three = chain_category(3);
  auto u = thin_functor(two, three, {0, 2}, "skip");
  SplitMix64 rng(23);
  auto X0 = direct_sum_rep(representable_rep(k5, two, 0), corepresentable_dual_rep(k5, two, 1));
  std::vector<Mat<Fp>> cx;
  for (int d : X0.dim) cx.push_back(random_invertible(k5, rng, d));
  auto X = conjugate_rep(X0, cx);
  auto Y0 = representable_rep(k5, three, 1);
  std::vector<Mat<Fp>> cy;
  for (int d : Y0.dim) cy.push_back(random_invertible(k5, rng, d));
  auto Y = conjugate_rep(Y0, cy);
  std::string why;
  CHECK_MESSAGE(verify_kan_adjunction(u, X, Y, KanSide::Left, &why), why);
  CHECK_MESSAGE(verify_kan_adjunction(u, X, Y, KanSide::Right, &why), why);
}

TEST_CASE("pointwise values agree with an independent slice-colimit recomputation") {
  auto two = chain_category(2);
  auto three = chain_category(3);
  auto u = thin_functor(two, three, {0, 1}, "u");
  auto X = direct_sum_rep(representable_rep(k5, two, 0), representable_rep(k5, two, 1));
  auto res = kan_extension(u, X, KanSide::Left);
  for (size_t b = 0; b < three->objects.size(); ++b) {
    SliceCategory s = slice(u, static_cast<int>(b), SliceSide::Under);
    auto cc = colimit(restrict_rep(s.projection, X), /*use_all_morphisms=*/true);
    CHECK(cc.dim == res.ext.dim[b]);
  }
}

TEST_CASE("shift consistency: curry and uncurry round-trip") {
  auto two = chain_category(2);
  auto p = product_category(two, two);
  std::map<int, Mat<Fp>> gens;
  std::vector<int> dims = {1, 1, 1, 1};
  for (int g : p.cat->generators) gens[g] = mat_id(k5, 1);
  Rep<Fp> X = make_rep(k5, p.cat, dims, gens);
  auto slices = curry_rep(p, two, two, X);
  REQUIRE(slices.size() == 2);
  std::vector<Nat<Fp>> arrows(two->mors.size());
  for (size_t m2 = 0; m2 < two->mors.size(); ++m2) {
    Nat<Fp> t;
    for (size_t o1 = 0; o1 < two->objects.size(); ++o1)
      t.at.push_back(X.mat[p.mor_of(two->identity[o1], static_cast<int>(m2))]);
    arrows[m2] = t;
  }
  Rep<Fp> back = uncurry_rep(p, two, two, slices, arrows);
  CHECK(back.dim == X.dim);
  for (size_t m = 0; m < X.mat.size(); ++m) CHECK(mat_eq(k5, back.mat[m], X.mat[m]));
}

TEST_CASE("represented shadow: restriction along u- is fully faithful with the stated image") {
  auto C = chain_category(2);
  auto sep = separate_source_sink(C, {0, 1}, ConeDirection::Source);
  SplitMix64 rng(31);
  auto P = direct_sum_rep(representable_rep(k5, sep.cone.cat, sep.cone.tip),
                          representable_rep(k5, sep.cone.cat, sep.cone.inclusion.ob[1]));
  std::vector<Mat<Fp>> conj;
  for (int d : P.dim) conj.push_back(random_invertible(k5, rng, d));
  auto X = conjugate_rep(P, conj);
  auto Q = restrict_rep(sep.u, X);
  auto P2 = representable_rep(k5, sep.cone.cat, sep.cone.inclusion.ob[0]);
  CHECK(hom_dim(X, P2) == hom_dim(Q, restrict_rep(sep.u, P2)));
  for (size_t i = 0; i < sep.sep_arrows.size(); ++i)
    CHECK(is_invertible(k5, Q.mat[sep.sep_arrows[i]]));
  // unit of the Kan adjunction is an isomorphism on the exactness class
  auto res = kan_extension(sep.u, Q, KanSide::Left);
  auto uLQ = restrict_rep(sep.u, res.ext);
  CHECK(is_natural_iso(Q, uLQ, res.canonical));
}
