#pragma once

#include <span>
#include <vector>

#include "kexsim/cycles.hpp"
#include "kexsim/graph.hpp"
#include "kexsim/objective.hpp"

namespace kexsim {

struct MatchedCounts {
  int total = 0;
  int sensitized = 0;
  int critical = 0;

  bool operator==(const MatchedCounts&) const = default;
};

// Tallies a matching against the graph's vertex records.
MatchedCounts matched_counts(const Matching& m, const CompatGraph& g);

// Exact optimum of the objective over vertex-disjoint packings of 2/3-cycles.
// Deterministic: equal-score optima resolve to the first one encountered by
// the canonical branch-and-bound order, so identical inputs give identical
// matchings.  Cycles in the result are sorted canonically.
Matching solve(const CompatGraph& g, const Objective& obj, int k_max = 3);

// Same, over a pre-enumerated canonical cycle set (skips re-enumeration).
Matching solve_over_cycles(const CompatGraph& g, std::span<const Cycle> cycles,
                           const Objective& obj);

}  // namespace kexsim
