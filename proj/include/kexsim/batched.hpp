#pragma once

#include <array>

#include "kexsim/solver.hpp"

namespace kexsim {

// Four-stage prioritized matching.  Each stage solves an exact packing on a
// shrinking vertex set, so the union is vertex-disjoint by construction:
//   1. critical pairs only, maximizing critical matched;
//   2. leftover critical + all highly-sensitized pairs, restricted to cycles
//      using at least one leftover critical pair, maximizing critical then
//      sensitized matched;
//   3. leftover highly-sensitized pairs only, maximizing sensitized matched;
//   4. everyone still unmatched, maximizing total matched.
struct BatchedResult {
  std::array<Matching, 4> stages;
  Matching combined() const;
};

BatchedResult solve_batched_detailed(const CompatGraph& g, int k_max = 3);
Matching solve_batched(const CompatGraph& g, int k_max = 3);

}  // namespace kexsim
