#include "kexsim/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace kexsim {

std::size_t CompatGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& adj : succ) m += adj.size();
  return m;
}

std::uint32_t CompatGraph::index_of(PairId id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id)
    throw std::out_of_range("pair id not in graph");
  return static_cast<std::uint32_t>(it - ids.begin());
}

bool CompatGraph::contains(PairId id) const {
  return std::binary_search(ids.begin(), ids.end(), id);
}

std::vector<std::pair<PairId, PairId>> CompatGraph::edge_list() const {
  std::vector<std::pair<PairId, PairId>> out;
  out.reserve(edge_count());
  for (std::size_t w = 0; w < succ.size(); ++w)
    for (std::uint32_t v : succ[w]) out.emplace_back(ids[w], ids[v]);
  return out;
}

CompatGraph build_graph(const PoolState& pool, const CrossmatchOracle& oracle) {
  CompatGraph g;
  g.records = pool.active;  // already sorted by id
  g.ids.reserve(g.records.size());
  for (const auto& r : g.records) g.ids.push_back(r.id);

  const std::size_t nv = g.records.size();
  g.succ.assign(nv, {});
  for (std::size_t w = 0; w < nv; ++w) {
    for (std::size_t v = 0; v < nv; ++v) {
      if (w == v) continue;
      if (oracle.edge_exists(g.records[w], g.records[v]))
        g.succ[w].push_back(static_cast<std::uint32_t>(v));
    }
  }
  return g;
}

CompatGraph graph_from_edges(
    std::vector<PairRecord> records,
    const std::vector<std::pair<PairId, PairId>>& edges) {
  std::sort(records.begin(), records.end(),
            [](const PairRecord& a, const PairRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].id == records[i - 1].id)
      throw std::invalid_argument("duplicate vertex id");

  CompatGraph g;
  g.records = std::move(records);
  g.ids.reserve(g.records.size());
  for (const auto& r : g.records) g.ids.push_back(r.id);
  g.succ.assign(g.records.size(), {});

  for (const auto& [w_id, v_id] : edges) {
    if (w_id == v_id) throw std::invalid_argument("self-loop edge");
    std::uint32_t w, v;
    try {
      w = g.index_of(w_id);
      v = g.index_of(v_id);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("edge endpoint is not a declared vertex");
    }
    g.succ[w].push_back(v);
  }
  for (auto& adj : g.succ) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return g;
}

CompatGraph induced_subgraph(const CompatGraph& g,
                             const std::vector<PairId>& keep) {
  std::vector<std::uint32_t> old_idx;
  old_idx.reserve(keep.size());
  for (PairId id : keep)
    if (g.contains(id)) old_idx.push_back(g.index_of(id));
  std::sort(old_idx.begin(), old_idx.end());
  old_idx.erase(std::unique(old_idx.begin(), old_idx.end()), old_idx.end());

  std::vector<std::uint32_t> remap(g.vertex_count(), UINT32_MAX);
  for (std::uint32_t i = 0; i < old_idx.size(); ++i) remap[old_idx[i]] = i;

  CompatGraph sub;
  sub.ids.reserve(old_idx.size());
  sub.records.reserve(old_idx.size());
  for (std::uint32_t oi : old_idx) {
    sub.ids.push_back(g.ids[oi]);
    sub.records.push_back(g.records[oi]);
  }
  sub.succ.assign(old_idx.size(), {});
  for (std::uint32_t i = 0; i < old_idx.size(); ++i) {
    for (std::uint32_t ov : g.succ[old_idx[i]]) {
      if (remap[ov] != UINT32_MAX) sub.succ[i].push_back(remap[ov]);
    }
  }
  return sub;
}

}  // namespace kexsim
