#pragma once

#include <vector>

#include "kexsim/graph.hpp"

namespace kexsim {

// An exchange cycle in canonical form: verts[i]'s donor gives to
// verts[i+1]'s patient (wrapping), rotated so verts.front() is the smallest
// id.  Cycles are ordered lexicographically on their vertex id sequence.
struct Cycle {
  std::vector<PairId> verts;

  std::size_t size() const { return verts.size(); }
  bool operator==(const Cycle& o) const { return verts == o.verts; }
  bool operator<(const Cycle& o) const { return verts < o.verts; }
};

// All simple directed cycles of length 2..k_max, canonical and sorted.
// k_max must be 2 or 3 (throws std::invalid_argument otherwise).
std::vector<Cycle> enumerate_cycles(const CompatGraph& g, int k_max);

// A vertex-disjoint set of cycles.
struct Matching {
  std::vector<Cycle> cycles;

  // Ids covered by the matching, sorted ascending.
  std::vector<PairId> matched_ids() const;
  bool vertex_disjoint() const;
};

}  // namespace kexsim
