#include <doctest.h>

#include "reflekt/field.hpp"
#include "reflekt/matrix.hpp"

using namespace reflekt;

TEST_CASE("Fp arithmetic") {
  Fp k(7);
  CHECK(k.add(5, 4) == 2);
  CHECK(k.mul(3, 5) == 1);
  CHECK(k.inv(3) == 5);
  CHECK(k.from_long(-1) == 6);
  CHECK_THROWS(Fp(6));
  CHECK_THROWS(Fp(1));
}

TEST_CASE("QQ arithmetic") {
  QQ k;
  auto x = k.from_fraction(1, 3);
  auto y = k.from_fraction(2, 5);
  CHECK(k.str(k.add(x, y)) == "11/15");
  CHECK(k.eq(k.mul(x, k.inv(x)), k.one()));
}

TEST_CASE("rref, rank, kernel over F5") {
  Fp k(5);
  Mat<Fp> m(2, 3);
  // [1 2 3; 2 4 2]
  m.at(0, 0) = 1; m.at(0, 1) = 2; m.at(0, 2) = 3;
  m.at(1, 0) = 2; m.at(1, 1) = 4; m.at(1, 2) = 2;
  CHECK(mat_rank(k, m) == 2);
  auto ker = kernel_basis(k, m);
  CHECK(ker.cols == 1);
  auto img = mat_mul(k, m, ker);
  CHECK(mat_is_zero(k, img));
}

TEST_CASE("solve and inverse over Q") {
  QQ k;
  Mat<QQ> a(2, 2);
  a.at(0, 0) = k.from_long(2); a.at(0, 1) = k.from_long(1);
  a.at(1, 0) = k.from_long(1); a.at(1, 1) = k.from_long(1);
  auto inv = inverse(k, a);
  REQUIRE(inv.has_value());
  CHECK(mat_eq(k, mat_mul(k, a, *inv), mat_id(k, 2)));
  Mat<QQ> b(2, 1);
  b.at(0, 0) = k.from_long(3);
  b.at(1, 0) = k.from_long(2);
  bool unique = false;
  auto x = solve(k, a, b, &unique);
  REQUIRE(x.has_value());
  CHECK(unique);
  CHECK(mat_eq(k, mat_mul(k, a, *x), b));
}

TEST_CASE("solve detects inconsistency") {
  Fp k(5);
  Mat<Fp> a(2, 1);
  a.at(0, 0) = 1;
  a.at(1, 0) = 2;
  Mat<Fp> b(2, 1);
  b.at(0, 0) = 1;
  b.at(1, 0) = 1;
  CHECK_FALSE(solve(k, a, b).has_value());
}

TEST_CASE("cokernel projection") {
  Fp k(32003);
  SplitMix64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    auto sub = rng.split(trial);
    Mat<Fp> m = random_matrix(k, sub, 4, rng.below(4) + 1);
    auto ck = cokernel(k, m);
    CHECK(ck.dim == 4 - mat_rank(k, m));
    CHECK(mat_is_zero(k, mat_mul(k, ck.proj, m)));
    CHECK(mat_eq(k, mat_mul(k, ck.proj, ck.sec), mat_id(k, ck.dim)));
  }
}

TEST_CASE("kernel from random products is exact") {
  QQ k;
  SplitMix64 rng(7);
  Mat<QQ> m(3, 5);
  for (auto& e : m.a) e = k.random(rng);
  auto ker = kernel_basis(k, m);
  CHECK(mat_is_zero(k, mat_mul(k, m, ker)));
  CHECK(ker.cols == 5 - mat_rank(k, m));
}
