#include "kexsim/cycles.hpp"

#include <algorithm>
#include <stdexcept>

namespace kexsim {

// Vertices are indexed in ascending id order, so enumerating with the anchor
// `a` as the smallest index yields each cycle exactly once and already in
// canonical rotation.  Adjacency bitsets make the closing-edge test O(1).
std::vector<Cycle> enumerate_cycles(const CompatGraph& g, int k_max) {
  if (k_max != 2 && k_max != 3)
    throw std::invalid_argument("cycle length cap must be 2 or 3");

  const std::uint32_t nv = static_cast<std::uint32_t>(g.vertex_count());
  const std::uint32_t words = (nv + 63) / 64;
  std::vector<std::uint64_t> adj(static_cast<std::size_t>(nv) * words, 0);
  auto has_edge = [&](std::uint32_t from, std::uint32_t to) {
    return (adj[static_cast<std::size_t>(from) * words + to / 64] >>
            (to % 64)) & 1u;
  };
  for (std::uint32_t w = 0; w < nv; ++w)
    for (std::uint32_t v : g.succ[w])
      adj[static_cast<std::size_t>(w) * words + v / 64] |= 1ull << (v % 64);

  std::vector<Cycle> out;
  for (std::uint32_t a = 0; a < nv; ++a) {
    for (std::uint32_t b : g.succ[a]) {
      if (b <= a) continue;
      if (has_edge(b, a)) out.push_back({{g.ids[a], g.ids[b]}});
      if (k_max < 3) continue;
      for (std::uint32_t c : g.succ[b]) {
        if (c <= a || c == b) continue;
        if (has_edge(c, a)) out.push_back({{g.ids[a], g.ids[b], g.ids[c]}});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PairId> Matching::matched_ids() const {
  std::vector<PairId> ids;
  for (const auto& c : cycles) ids.insert(ids.end(), c.verts.begin(), c.verts.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool Matching::vertex_disjoint() const {
  auto ids = matched_ids();
  return std::adjacent_find(ids.begin(), ids.end()) == ids.end();
}

}  // namespace kexsim
