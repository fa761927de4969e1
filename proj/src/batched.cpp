#include "kexsim/batched.hpp"

#include <algorithm>

namespace kexsim {

namespace {

std::vector<PairId> ids_where(const CompatGraph& g,
                              bool (*pred)(const PairRecord&)) {
  std::vector<PairId> out;
  for (const auto& r : g.records)
    if (pred(r)) out.push_back(r.id);
  return out;
}

// Sorted-vector set difference.
std::vector<PairId> minus(const std::vector<PairId>& a,
                          const std::vector<PairId>& b) {
  std::vector<PairId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

std::vector<PairId> unite(std::vector<PairId> a, const std::vector<PairId>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

Matching BatchedResult::combined() const {
  Matching m;
  for (const auto& stage : stages)
    m.cycles.insert(m.cycles.end(), stage.cycles.begin(), stage.cycles.end());
  std::sort(m.cycles.begin(), m.cycles.end());
  return m;
}

BatchedResult solve_batched_detailed(const CompatGraph& g, int k_max) {
  BatchedResult result;

  const std::vector<PairId> critical =
      ids_where(g, [](const PairRecord& r) { return r.critical; });
  const std::vector<PairId> sensitized =
      ids_where(g, [](const PairRecord& r) { return r.highly_sensitized; });

  // Stage 1: critical pairs among themselves, critical count first.
  result.stages[0] =
      solve(induced_subgraph(g, critical), Objective::time(), k_max);
  std::vector<PairId> matched = result.stages[0].matched_ids();

  // Stage 2: leftover criticals may recruit highly-sensitized partners, but
  // every cycle must still serve at least one leftover critical pair.
  const std::vector<PairId> leftover_crit = minus(critical, matched);
  {
    CompatGraph sub =
        induced_subgraph(g, unite(leftover_crit, minus(sensitized, matched)));
    std::vector<Cycle> usable;
    for (const auto& c : enumerate_cycles(sub, k_max)) {
      bool serves_crit = std::any_of(
          c.verts.begin(), c.verts.end(), [&](PairId id) {
            return std::binary_search(leftover_crit.begin(),
                                      leftover_crit.end(), id);
          });
      if (serves_crit) usable.push_back(c);
    }
    result.stages[1] =
        solve_over_cycles(sub, usable, Objective::critical_then_sens());
    matched = unite(std::move(matched), result.stages[1].matched_ids());
  }

  // Stage 3: remaining highly-sensitized pairs among themselves.
  result.stages[2] = solve(induced_subgraph(g, minus(sensitized, matched)),
                           Objective::sens(), k_max);
  matched = unite(std::move(matched), result.stages[2].matched_ids());

  // Stage 4: everyone still unmatched, plain maximum cardinality.
  std::vector<PairId> all = g.ids;
  result.stages[3] = solve(induced_subgraph(g, minus(all, matched)),
                           Objective::max_cardinality(), k_max);
  return result;
}

Matching solve_batched(const CompatGraph& g, int k_max) {
  return solve_batched_detailed(g, k_max).combined();
}

}  // namespace kexsim
