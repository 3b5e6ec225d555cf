#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "reflekt/rng.hpp"

namespace reflekt {

// Prime field F_p. Elements are canonical residues in [0, p); p < 2^31 so
// products fit into uint64_t without overflow.
class Fp {
  uint64_t p_;

  static bool is_prime(uint64_t p) {
    if (p < 2) return false;
    for (uint64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) return false;
    return true;
  }

 public:
  using Elem = uint64_t;

  explicit Fp(uint64_t p = 32003) : p_(p) {
    if (p >= (1ULL << 31) || !is_prime(p))
      throw std::invalid_argument("Fp: modulus must be a prime < 2^31, got " + std::to_string(p));
  }

  uint64_t modulus() const { return p_; }
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool eq(Elem a, Elem b) const { return a == b; }

  Elem from_long(long long v) const {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += static_cast<long long>(p_);
    return static_cast<Elem>(r);
  }
  Elem from_fraction(long long num, long long den) const {
    return mul(from_long(num), inv(from_long(den)));
  }

  Elem add(Elem a, Elem b) const { Elem s = a + b; return s >= p_ ? s - p_ : s; }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return (a * b) % p_; }

  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("Fp: division by zero");
    // Fermat: a^(p-2)
    Elem r = 1, base = a;
    uint64_t e = p_ - 2;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem random(SplitMix64& rng) const { return rng.next() % p_; }
  Elem random_nonzero(SplitMix64& rng) const { return 1 + rng.next() % (p_ - 1); }

  std::string str(Elem a) const { return std::to_string(a); }
  std::string name() const { return "F" + std::to_string(p_); }
};

// Arbitrary-precision rationals via GMP. All arithmetic exact.
class QQ {
 public:
  using Elem = mpq_class;

  QQ() = default;

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool eq(const Elem& a, const Elem& b) const { return cmp(a, b) == 0; }

  Elem from_long(long long v) const { return Elem(static_cast<long>(v)); }
  Elem from_fraction(long long num, long long den) const {
    Elem r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
  }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw std::domain_error("QQ: division by zero");
    return 1 / a;
  }
  Elem div(const Elem& a, const Elem& b) const { return a / inv_guard(b); }

  Elem random(SplitMix64& rng) const {
    // small numerators/denominators keep audit runs readable
    long num = static_cast<long>(rng.below(11)) - 5;
    long den = 1 + rng.below(3);
    Elem r(num, den);
    r.canonicalize();
    return r;
  }
  Elem random_nonzero(SplitMix64& rng) const {
    Elem r = random(rng);
    while (is_zero(r)) r = random(rng);
    return r;
  }

  std::string str(const Elem& a) const { return a.get_str(); }
  std::string name() const { return "Q"; }

 private:
  const Elem& inv_guard(const Elem& b) const {
    if (is_zero(b)) throw std::domain_error("QQ: division by zero");
    return b;
  }
};

}  // namespace reflekt
