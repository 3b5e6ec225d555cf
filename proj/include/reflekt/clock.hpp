#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace reflekt {

// Orientations of an n-cycle and their reflection combinatorics. Arrow i
// connects vertex i to vertex i+1 (mod n); +1 points forward ("clockwise"),
// -1 backward.
struct CycleOrientation {
  std::vector<int> o;  // entries +1 / -1

  int n() const { return static_cast<int>(o.size()); }
  bool operator==(const CycleOrientation& other) const { return o == other.o; }
  bool operator<(const CycleOrientation& other) const { return o < other.o; }
};

// unordered pair {#clockwise, #anticlockwise}
std::pair<int, int> clock_invariant(const CycleOrientation& q);

bool is_source(const CycleOrientation& q, int v);
bool is_sink(const CycleOrientation& q, int v);

// flips both arrows at a source or sink; nullopt when v is neither
std::optional<CycleOrientation> reflect_cycle(const CycleOrientation& q, int v);

// canonical representative under rotation and reflection (dihedral action;
// reversing the cycle also reverses all arrows)
CycleOrientation canonical_cycle(const CycleOrientation& q);

// p arrows forward then q arrows backward
CycleOrientation normal_form_cycle(int p, int q);

// All orientations reachable from q by admissible reflections, as canonical
// representatives.
std::vector<CycleOrientation> reflection_component(const CycleOrientation& q);

struct ClockCheck {
  bool reflections_preserve_invariant = true;
  bool equal_invariant_connected = true;
  bool reaches_normal_form = true;
};

// exhaustive check over all orientations of the n-cycle
ClockCheck check_clock_condition(int n);

}  // namespace reflekt
