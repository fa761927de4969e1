#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "kexsim/crossmatch.hpp"
#include "kexsim/pool.hpp"

namespace kexsim {

// Directed compatibility graph over a snapshot of active pairs.
// Vertices are stored sorted by id; adjacency uses dense local indices for
// solver speed, with `ids` mapping back to pair ids.  `records` carries a
// copy of each vertex's PairRecord so weighting never needs the pool.
struct CompatGraph {
  std::vector<PairId> ids;            // sorted ascending
  std::vector<PairRecord> records;    // parallel to ids
  std::vector<std::vector<std::uint32_t>> succ;  // out-neighbors, sorted

  std::size_t vertex_count() const { return ids.size(); }
  std::size_t edge_count() const;

  // Local index of a pair id; throws std::out_of_range if absent.
  std::uint32_t index_of(PairId id) const;
  bool contains(PairId id) const;

  // All edges as (donor-side id, patient-side id), sorted.
  std::vector<std::pair<PairId, PairId>> edge_list() const;
};

// Graph over every active pair in the pool; an edge w->v exists iff the
// oracle accepts donor(w) for patient(v).
CompatGraph build_graph(const PoolState& pool, const CrossmatchOracle& oracle);

// Graph from explicit records and edges (instance files, tests).  Edges whose
// endpoints are unknown throw std::invalid_argument.
CompatGraph graph_from_edges(std::vector<PairRecord> records,
                             const std::vector<std::pair<PairId, PairId>>& edges);

// Restriction to a subset of vertex ids (absent ids are ignored).
CompatGraph induced_subgraph(const CompatGraph& g,
                             const std::vector<PairId>& keep);

}  // namespace kexsim
