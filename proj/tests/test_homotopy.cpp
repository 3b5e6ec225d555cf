#include <doctest.h>

#include "reflekt/clock.hpp"
#include "reflekt/field.hpp"
#include "reflekt/homotopy.hpp"

using namespace reflekt;

namespace {

const Fp k5(5);

Complex<Fp> sphere(int deg, int dim = 1) {
  Complex<Fp> x = zero_complex<Fp>(deg, deg);
  x.dims[0] = dim;
  return x;
}

Complex<Fp> disc(int top) {
  // identity differential from degree top to top-1
  Complex<Fp> x = zero_complex<Fp>(top - 1, top);
  x.dims = {1, 1};
  x.d[1] = mat_id(k5, 1);
  return x;
}

}  // namespace

TEST_CASE("homology of basic complexes") {
  auto d = disc(1);
  auto h = homology(k5, d);
  for (int n = h.lo; n <= h.hi; ++n) CHECK(h.dims[n - h.lo] == 0);

  auto s = sphere(0, 2);
  auto hs = homology(k5, s);
  CHECK(hs.dims[0 - hs.lo] == 2);

  // 0 -> k^2 -> k -> 0 with surjective differential
  Complex<Fp> x = zero_complex<Fp>(0, 1);
  x.dims = {1, 2};
  Mat<Fp> dmat(1, 2);
  dmat.at(0, 0) = 1;
  x.d[1] = dmat;
  auto hx = homology(k5, x);
  CHECK(hx.dims[1 - hx.lo] == 1);
  CHECK(hx.dims[0 - hx.lo] == 0);
}

TEST_CASE("cone of the identity is acyclic; cone over zero is the target") {
  auto a = disc(0);
  auto c = cone(k5, a, a, cmap_identity(k5, a));
  CHECK(validate_complex(k5, c.cx).empty());
  auto h = homology(k5, c.cx);
  for (int n = h.lo; n <= h.hi; ++n) CHECK(h.dims[n - h.lo] == 0);

  Complex<Fp> zero = zero_complex<Fp>(0, 0);
  auto b = sphere(0, 3);
  auto cz = cone(k5, zero, b, zero_cmap(k5, zero, b, 0, 0));
  auto hz = homology(k5, cz.cx);
  CHECK(hz.dims[0 - hz.lo] == 3);
}

TEST_CASE("cone and fiber canonical maps with their null-homotopies") {
  SplitMix64 rng(3);
  auto a = random_complex_conjugated(k5, rng, -2, 2, 2);
  auto b = random_complex_conjugated(k5, rng, -2, 2, 2);
  auto f = random_chain_map(k5, rng, a, b);
  auto c = cone(k5, a, b, f);
  CHECK(validate_complex(k5, c.cx).empty());
  CHECK(validate_cmap(k5, b, c.cx, c.incl).empty());
  // composite a -> b -> cone is null-homotopic via the shipped homotopy
  auto comp = cmap_compose(k5, a, b, c.cx, c.incl, f);
  CHECK(is_null_homotopy(k5, a, c.cx, comp, c.homotopy));

  auto fb = fiber(k5, a, b, f);
  CHECK(validate_complex(k5, fb.cx).empty());
  CHECK(validate_cmap(k5, fb.cx, a, fb.proj).empty());
  auto comp2 = cmap_compose(k5, fb.cx, a, b, f, fb.proj);
  CHECK(is_null_homotopy(k5, fb.cx, b, comp2, fb.homotopy));

  // fiber(b -> cone(f)) has the homology of a
  auto fb2 = fiber(k5, b, c.cx, c.incl);
  auto ha = homology(k5, a);
  auto hf = homology(k5, fb2.cx);
  for (int n = std::min(ha.lo, hf.lo); n <= std::max(ha.hi, hf.hi); ++n) {
    int da = (n >= ha.lo && n <= ha.hi) ? ha.dims[n - ha.lo] : 0;
    int df = (n >= hf.lo && n <= hf.hi) ? hf.dims[n - hf.lo] : 0;
    CHECK(da == df);
  }
}

TEST_CASE("direct sums satisfy the biproduct identities") {
  SplitMix64 rng(9);
  std::vector<Complex<Fp>> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(random_complex_conjugated(k5, rng, -1, 1, 2));
  auto s = direct_sum(k5, xs);
  CHECK(validate_complex(k5, s.cx).empty());
  int chi = 0;
  for (auto& x : xs) chi += euler_char(x);
  CHECK(euler_char(s.cx) == chi);
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < xs.size(); ++j) {
      auto comp = cmap_compose(k5, xs[j], s.cx, xs[i], s.proj[i], s.inj[j]);
      for (int n = comp.lo; n <= comp.hi; ++n) {
        Mat<Fp> expect = i == j ? mat_id(k5, xs[i].dim_at(n))
                                : Mat<Fp>(xs[i].dim_at(n), xs[j].dim_at(n));
        CHECK(mat_eq(k5, comp.at_deg(k5, xs[j], xs[i], n), expect));
      }
    }
}

TEST_CASE("reflection on A2: the three BGP images") {
  // C = point y; C^- = (v -> y)
  auto rp = make_reflection(terminal_category(), {0});
  int v = rp.minus.tip, y_m = rp.minus.inclusion.ob[0];
  int w = rp.plus.tip, y_p = rp.plus.inclusion.ob[0];

  auto mk = [&](const Complex<Fp>& at_v, const Complex<Fp>& at_y, const CMap<Fp>& a1) {
    std::vector<Complex<Fp>> at(2);
    at[v] = at_v;
    at[y_m] = at_y;
    std::map<int, CMap<Fp>> gens;
    gens[rp.minus.cone_arrows[0]] = a1;
    return make_cxrep(k5, rp.minus.cat, at, gens);
  };

  auto one = sphere(0);
  Complex<Fp> zero = zero_complex<Fp>(0, 0);

  // P_v = (k -> k, identity): image is the simple at y
  auto Pv = mk(one, one, cmap_identity(k5, one));
  auto sPv = reflect_minus(rp, Pv);
  auto hw = homology(k5, sPv.at[w]);
  for (int n = hw.lo; n <= hw.hi; ++n) CHECK(hw.dims[n - hw.lo] == 0);
  auto hy = homology(k5, sPv.at[y_p]);
  CHECK(hy.dims[0 - hy.lo] == 1);

  // S_y = (0 -> k): image is the projective-injective at y (k = k)
  auto Sy = mk(zero, one, zero_cmap(k5, zero, one, 0, 0));
  auto sSy = reflect_minus(rp, Sy);
  auto h2 = homology(k5, sSy.at[w]);
  CHECK(h2.dims[0 - h2.lo] == 1);
  CHECK(is_invertible(k5, sSy.mat[rp.plus.cone_arrows[0]].at_deg(k5, sSy.at[y_p], sSy.at[w], 0)));

  // S_v = (k -> 0): image at w is k in degree +1 per the cone convention
  auto Sv = mk(one, zero, zero_cmap(k5, one, zero, 0, 0));
  auto sSv = reflect_minus(rp, Sv);
  auto h3 = homology(k5, sSv.at[w]);
  CHECK(h3.dims[1 - h3.lo] == 1);
  CHECK(h3.dims[0 - h3.lo] == 0);
  auto h3y = homology(k5, sSv.at[y_p]);
  for (int n = h3y.lo; n <= h3y.hi; ++n) CHECK(h3y.dims[n - h3y.lo] == 0);

  // Euler characteristic bookkeeping
  CHECK(k0_reflect_check(rp, Pv));
  CHECK(k0_reflect_check(rp, Sv));
  CHECK(k0_reflect_check(rp, Sy));
}

TEST_CASE("round trips are quasi-isomorphisms") {
  auto rp = make_reflection(terminal_category(), {0});
  int v = rp.minus.tip, y_m = rp.minus.inclusion.ob[0];
  auto one = sphere(0);
  std::vector<Complex<Fp>> at(2);
  at[v] = one;
  at[y_m] = one;
  std::map<int, CMap<Fp>> gens;
  gens[rp.minus.cone_arrows[0]] = cmap_identity(k5, one);
  auto Pv = make_cxrep(k5, rp.minus.cat, at, gens);
  auto rt = roundtrip_compare(rp, Pv);
  CHECK(rt.quasi_iso);

  // all-zero representation round-trips trivially
  std::vector<Complex<Fp>> zat(2, zero_complex<Fp>(0, 0));
  std::map<int, CMap<Fp>> zgens;
  zgens[rp.minus.cone_arrows[0]] =
      zero_cmap(k5, zat[0], zat[1], 0, 0);
  auto Z = make_cxrep(k5, rp.minus.cat, zat, zgens);
  CHECK(roundtrip_compare(rp, Z).quasi_iso);

  // random instances both ways, including repetitions and n = 2
  SplitMix64 rng(77);
  for (int trial = 0; trial < 12; ++trial) {
    auto sub = rng.split(trial);
    auto C = discrete_category({"y1", "y2"});
    std::vector<int> ys = trial % 2 ? std::vector<int>{0, 1} : std::vector<int>{0, 0};
    auto rp2 = make_reflection(C, ys);
    // random complexes at every object of C^-, random maps on the cone arrows
    std::vector<Complex<Fp>> ats(rp2.minus.cat->objects.size());
    for (auto& c : ats) c = random_complex_conjugated(k5, sub, -2, 2, 2);
    std::map<int, CMap<Fp>> g2;
    for (size_t i = 0; i < rp2.minus.cone_arrows.size(); ++i) {
      int a = rp2.minus.cat->mors[rp2.minus.cone_arrows[i]].src;
      int b = rp2.minus.cat->mors[rp2.minus.cone_arrows[i]].tgt;
      g2[rp2.minus.cone_arrows[i]] = random_chain_map(k5, sub, ats[a], ats[b]);
    }
    auto X = make_cxrep(k5, rp2.minus.cat, ats, g2);
    auto rt2 = roundtrip_compare(rp2, X);
    CHECK(rt2.quasi_iso);

    // plus side
    std::vector<Complex<Fp>> atp(rp2.plus.cat->objects.size());
    for (auto& c : atp) c = random_complex_conjugated(k5, sub, -2, 2, 2);
    std::map<int, CMap<Fp>> g3;
    for (size_t i = 0; i < rp2.plus.cone_arrows.size(); ++i) {
      int a = rp2.plus.cat->mors[rp2.plus.cone_arrows[i]].src;
      int b = rp2.plus.cat->mors[rp2.plus.cone_arrows[i]].tgt;
      g3[rp2.plus.cone_arrows[i]] = random_chain_map(k5, sub, atp[a], atp[b]);
    }
    auto Y = make_cxrep(k5, rp2.plus.cat, atp, g3);
    auto rt3 = roundtrip_compare_plus(rp2, Y);
    CHECK(rt3.quasi_iso);
  }
}

TEST_CASE("is_quasi_iso distinguishes unequal homology") {
  auto rp = make_reflection(terminal_category(), {0});
  std::vector<Complex<Fp>> a1(2), a2(2);
  a1[0] = sphere(0);
  a1[1] = sphere(0);
  a2[0] = sphere(0, 2);
  a2[1] = sphere(0, 2);
  std::map<int, CMap<Fp>> g1, g2;
  g1[rp.minus.cone_arrows[0]] = zero_cmap(k5, a1[0], a1[1], 0, 0);
  g2[rp.minus.cone_arrows[0]] = zero_cmap(k5, a2[0], a2[1], 0, 0);
  auto X = make_cxrep(k5, rp.minus.cat, a1, g1);
  auto Y = make_cxrep(k5, rp.minus.cat, a2, g2);
  ChainMapRep<Fp> t;
  t.at.push_back(zero_cmap(k5, a1[0], a2[0], 0, 0));
  t.at.push_back(zero_cmap(k5, a1[1], a2[1], 0, 0));
  CHECK(validate_chain_map_rep(X, Y, t).empty());
  CHECK_FALSE(is_quasi_iso(X, Y, t));
}

TEST_CASE("Cor 9.6 route: reflecting after separating the objects agrees") {
  // repeated ys in the point category; separate, reflect there, compare
  auto C = terminal_category();
  std::vector<int> ys = {0, 0};
  auto rp = make_reflection(C, ys);
  SplitMix64 rng(101);
  std::vector<Complex<Fp>> ats(rp.minus.cat->objects.size());
  for (auto& c : ats) c = random_complex_conjugated(k5, rng, -1, 1, 2);
  std::map<int, CMap<Fp>> gens;
  for (size_t i = 0; i < rp.minus.cone_arrows.size(); ++i) {
    int a = rp.minus.cat->mors[rp.minus.cone_arrows[i]].src;
    int b = rp.minus.cat->mors[rp.minus.cone_arrows[i]].tgt;
    gens[rp.minus.cone_arrows[i]] = random_chain_map(k5, rng, ats[a], ats[b]);
  }
  auto X = make_cxrep(k5, rp.minus.cat, ats, gens);
  auto sX = reflect_minus(rp, X);

  auto sep = separate_objects(C, ys);
  auto rp_sep = make_reflection(sep.cat, sep.ytilde);
  // transport X along the equivalence: X~ at object o = X at p(o)-side object
  std::vector<Complex<Fp>> at2(rp_sep.minus.cat->objects.size());
  std::map<int, CMap<Fp>> g2;
  // C~^- objects: tip + images of C~
  at2[rp_sep.minus.tip] = X.at[rp.minus.tip];
  for (size_t o = 0; o < sep.cat->objects.size(); ++o)
    at2[rp_sep.minus.inclusion.ob[o]] = X.at[rp.minus.inclusion.ob[sep.p.ob[o]]];
  for (size_t i = 0; i < rp_sep.minus.cone_arrows.size(); ++i)
    g2[rp_sep.minus.cone_arrows[i]] = X.mat[rp.minus.cone_arrows[i]];
  for (int g : rp_sep.minus.cat->generators) {
    const auto& cls = rp_sep.minus.glue.cls[g];
    if (cls.kind == GluingResult::Kind::In2)
      g2[g] = X.mat[rp.minus.inclusion.mor[sep.p.mor[cls.m]]];
  }
  auto Xsep = make_cxrep(k5, rp_sep.minus.cat, at2, g2);
  auto sXsep = reflect_minus(rp_sep, Xsep);
  // compare the tips: same cone, since the summands transport identically
  auto h1 = homology(k5, sX.at[rp.plus.tip]);
  auto h2 = homology(k5, sXsep.at[rp_sep.plus.tip]);
  CHECK(h1.dims == h2.dims);
  CHECK(h1.lo == h2.lo);
}

TEST_CASE("clock condition at small n") {
  for (int n = 2; n <= 5; ++n) {
    auto chk = check_clock_condition(n);
    CHECK(chk.reflections_preserve_invariant);
    CHECK(chk.equal_invariant_connected);
    CHECK(chk.reaches_normal_form);
  }
}
