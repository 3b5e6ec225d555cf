#pragma once

#include <cstdint>

namespace reflekt {

// SplitMix64. Deterministic across platforms (no std::*_distribution),
// splittable so that instance k of a suite gets an independent stream.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Child stream for instance i, independent of further draws on the parent.
  SplitMix64 split(uint64_t i) const {
    SplitMix64 child(state ^ (0x632be59bd9b4e019ULL * (i + 1)));
    child.next();
    return child;
  }

  // Uniform in [0, n). Modulo bias is irrelevant at desk scale.
  int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(n)); }

  int range(int lo, int hi) { return lo + below(hi - lo + 1); }

  bool coin() { return (next() & 1) != 0; }
};

}  // namespace reflekt
