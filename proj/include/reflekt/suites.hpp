#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reflekt/amalgam.hpp"
#include "reflekt/catcore.hpp"
#include "reflekt/rng.hpp"

namespace reflekt {

// Named property suites. Every suite is deterministic in (seed, count); the
// acceptance binary runs them at the pinned parameters.

struct SuiteResult {
  std::string name;
  bool pass = false;
  int instances = 0;
  std::string detail;                 // first counterexample, when failing
  std::vector<std::string> digests;   // per-instance digests where meaningful
};

// every allowable word of length <= max_len over random discrete-apex spans
// has a single terminal normal form (exhausted reduction DAG)
SuiteResult suite_amalgam_confluence(uint64_t seed, int count, int max_len = 6);

// pushout legs faithful/injective, 3-for-2 inheritance, fully faithful
// transfer; random corpus plus the named shape pushouts
SuiteResult suite_amalgamation_soundness(uint64_t seed, int count);

// disjoint fully faithful images, no backward morphisms, unique standard
// factorizations by brute-force scan
SuiteResult suite_gluing_lemma(uint64_t seed, int count);

// triangle identities, hom-dimension equality, pointwise slice recomputation
SuiteResult suite_kan_adjunction(uint64_t seed, int count);

// right Kan along every sieve of the shape corpus vanishes on the
// complement; dually for cosieves
SuiteResult suite_ext_by_zero(uint64_t seed);

// restriction along u± fully faithful on representations; essential image =
// diagrams with invertible separated components (both inclusions constructive)
SuiteResult suite_epi_shadow(uint64_t seed, int count, int hom_pairs = 20);

// the five-object-class decomposition of (u+/w) and the adjoint for H
SuiteResult suite_slice_combinatorics(uint64_t seed, int count);

// both canonical round-trip comparisons are quasi-isomorphisms
SuiteResult suite_roundtrip(uint64_t seed, int count, uint64_t prime = 5, int rational_audit = 20);

// BGP specialization on A2 and the Euler-characteristic identity over the
// round-trip corpus
SuiteResult suite_bgp_a2(uint64_t seed, int count);

// clock invariant preserved, equal-invariant orientations connected through
// the normal form; exhaustive for n <= max_n
SuiteResult suite_clock(int max_n = 6);

// the saturation oracle reproduces the frozen composition table of R
SuiteResult suite_r_table();

// shared corpus generator (exposed for the CLI)
CatPtr random_small_category(SplitMix64& rng, int max_obj, int max_mor);
Span random_discrete_span(SplitMix64& rng, int max_obj, int max_mor);

}  // namespace reflekt
