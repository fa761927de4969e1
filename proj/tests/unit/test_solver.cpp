#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "kexsim/batched.hpp"
#include "kexsim/cycles.hpp"
#include "kexsim/graph.hpp"
#include "kexsim/rng.hpp"
#include "kexsim/solver.hpp"

using namespace kexsim;

namespace {

PairRecord rec(PairId id, bool sens = false, bool crit = false) {
  PairRecord r;
  r.id = id;
  r.patient_blood = BloodType::A;
  r.donor_blood = BloodType::A;
  r.sensitization = sens ? 0.9 : 0.1;
  r.highly_sensitized = sens;
  r.critical = crit;
  return r;
}

CompatGraph complete_graph(int n) {
  std::vector<PairRecord> recs;
  std::vector<std::pair<PairId, PairId>> edges;
  for (int i = 0; i < n; ++i) recs.push_back(rec(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) edges.emplace_back(i, j);
  return graph_from_edges(recs, edges);
}

// Seeded random instance: random edges plus random sensitized/critical flags.
CompatGraph random_graph(std::uint64_t seed, int nv, double edge_p,
                         double sens_p = 0.4, double crit_p = 0.3) {
  RngStream s(seed);
  std::vector<PairRecord> recs;
  for (int i = 0; i < nv; ++i)
    recs.push_back(rec(i, s.bernoulli(sens_p), s.bernoulli(crit_p)));
  std::vector<std::pair<PairId, PairId>> edges;
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      if (i != j && s.bernoulli(edge_p)) edges.emplace_back(i, j);
  return graph_from_edges(recs, edges);
}

// Exhaustive oracle: enumerates every vertex-disjoint subset of the cycle
// set and returns the lexicographically best (primary, secondary, tertiary)
// score tuple for the objective's chain.
struct ScoreTuple {
  std::array<int, 3> v{0, 0, 0};
  bool operator<(const ScoreTuple& o) const { return v < o.v; }
  bool operator==(const ScoreTuple& o) const { return v == o.v; }
};

ScoreTuple tuple_for(const CompatGraph& g, const std::vector<PairId>& ids,
                     Objective::Kind kind) {
  int total = 0, sens = 0, crit = 0;
  for (PairId id : ids) {
    const auto& r = g.records[g.index_of(id)];
    ++total;
    if (r.highly_sensitized) ++sens;
    if (r.critical) ++crit;
  }
  switch (kind) {
    case Objective::Kind::MaxCardinality: return {{total, sens, crit}};
    case Objective::Kind::Sens: return {{sens, total, crit}};
    case Objective::Kind::Time: return {{crit, total, sens}};
    case Objective::Kind::CriticalThenSens: return {{crit, sens, total}};
    default: return {{0, 0, 0}};
  }
}

ScoreTuple brute_force_best(const CompatGraph& g, Objective::Kind kind) {
  auto cycles = enumerate_cycles(g, 3);
  const int nc = static_cast<int>(cycles.size());
  std::vector<std::uint64_t> masks(nc, 0);
  for (int i = 0; i < nc; ++i)
    for (PairId id : cycles[i].verts)
      masks[i] |= 1ull << g.index_of(id);

  ScoreTuple best;  // empty matching is always legal
  std::vector<PairId> chosen_ids;
  auto recurse = [&](auto&& self, int start, std::uint64_t used) -> void {
    ScoreTuple t = tuple_for(g, chosen_ids, kind);
    if (best < t) best = t;
    for (int i = start; i < nc; ++i) {
      if (masks[i] & used) continue;
      std::size_t before = chosen_ids.size();
      chosen_ids.insert(chosen_ids.end(), cycles[i].verts.begin(),
                        cycles[i].verts.end());
      self(self, i + 1, used | masks[i]);
      chosen_ids.resize(before);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

ScoreTuple solver_tuple(const CompatGraph& g, const Objective& obj) {
  Matching m = solve(g, obj);
  REQUIRE(m.vertex_disjoint());
  for (const auto& c : m.cycles) {
    REQUIRE(c.size() >= 2);
    REQUIRE(c.size() <= 3);
    // Every consecutive edge must exist (wrapping).
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::uint32_t from = g.index_of(c.verts[i]);
      std::uint32_t to = g.index_of(c.verts[(i + 1) % c.size()]);
      const auto& adj = g.succ[from];
      REQUIRE(std::binary_search(adj.begin(), adj.end(), to));
    }
  }
  return tuple_for(g, m.matched_ids(), obj.kind);
}

}  // namespace

TEST_CASE("cycle enumeration on a complete bidirectional triangle") {
  CompatGraph g = complete_graph(3);
  auto cycles = enumerate_cycles(g, 3);
  REQUIRE(cycles.size() == 5);  // 3 two-cycles + 2 orientations of the triangle
  int twos = 0, threes = 0;
  for (const auto& c : cycles) {
    if (c.size() == 2) ++twos;
    if (c.size() == 3) ++threes;
    // Canonical: smallest id first, sorted overall, edges verified below.
    CHECK(*std::min_element(c.verts.begin(), c.verts.end()) == c.verts[0]);
  }
  CHECK(twos == 3);
  CHECK(threes == 2);
  CHECK(std::is_sorted(cycles.begin(), cycles.end()));
  CHECK(std::adjacent_find(cycles.begin(), cycles.end()) == cycles.end());

  CHECK(enumerate_cycles(g, 2).size() == 3);
  CHECK_THROWS_AS(enumerate_cycles(g, 4), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_cycles(g, 1), std::invalid_argument);
}

TEST_CASE("cycle enumeration edge cases") {
  // No edges at all.
  std::vector<PairRecord> recs{rec(0), rec(1)};
  CHECK(enumerate_cycles(graph_from_edges(recs, {}), 3).empty());
  // A single directed edge cannot close.
  CHECK(enumerate_cycles(graph_from_edges(recs, {{0, 1}}), 3).empty());
  // Two opposite edges close one 2-cycle.
  auto cycles = enumerate_cycles(graph_from_edges(recs, {{0, 1}, {1, 0}}), 3);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].verts == std::vector<PairId>{0, 1});
}

TEST_CASE("cycle count against subset brute force on random graphs") {
  // Independent recount: try every 2- and 3-subset with every rotation.
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    CompatGraph g = random_graph(seed, 7, 0.4);
    auto has = [&](int i, int j) {
      const auto& adj = g.succ[i];
      return std::binary_search(adj.begin(), adj.end(),
                                static_cast<std::uint32_t>(j));
    };
    int expect = 0;
    int n = static_cast<int>(g.vertex_count());
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (has(i, j) && has(j, i)) ++expect;
        for (int k = j + 1; k < n; ++k) {
          if (has(i, j) && has(j, k) && has(k, i)) ++expect;
          if (has(i, k) && has(k, j) && has(j, i)) ++expect;
        }
      }
    CHECK(enumerate_cycles(g, 3).size() == static_cast<std::size_t>(expect));
  }
}

TEST_CASE("trivial objective choices") {
  // One 2-cycle between a sensitized and a plain pair: chosen under Sens.
  std::vector<PairRecord> recs{rec(0, true), rec(1)};
  CompatGraph g = graph_from_edges(recs, {{0, 1}, {1, 0}});
  Matching m = solve(g, Objective::sens());
  REQUIRE(m.cycles.size() == 1);
  CHECK(tuple_for(g, m.matched_ids(), Objective::Kind::Sens).v[0] == 1);

  // A critical 2-cycle and a disjoint non-critical triangle: Time takes both.
  std::vector<PairRecord> recs2{rec(0, false, true), rec(1),
                                rec(2), rec(3), rec(4)};
  CompatGraph g2 = graph_from_edges(
      recs2, {{0, 1}, {1, 0}, {2, 3}, {3, 4}, {4, 2}});
  Matching m2 = solve(g2, Objective::time());
  CHECK(m2.cycles.size() == 2);
  auto t = tuple_for(g2, m2.matched_ids(), Objective::Kind::Time);
  CHECK(t.v[0] == 1);  // critical
  CHECK(t.v[1] == 5);  // total
  // Empty graph gives an empty matching.
  CHECK(solve(graph_from_edges({}, {}), Objective::time()).cycles.empty());
}

TEST_CASE("solver matches the exhaustive oracle on random graphs") {
  const Objective objectives[] = {Objective::max_cardinality(),
                                  Objective::sens(), Objective::time(),
                                  Objective::critical_then_sens()};
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    int nv = 3 + static_cast<int>(seed % 6);  // 3..8
    double p = seed % 3 == 0 ? 0.25 : (seed % 3 == 1 ? 0.45 : 0.7);
    CompatGraph g = random_graph(seed * 977, nv, p);
    for (const auto& obj : objectives) {
      CAPTURE(seed);
      CAPTURE(obj.name());
      CHECK(solver_tuple(g, obj) == brute_force_best(g, obj.kind));
    }
  }
}

TEST_CASE("solver is deterministic and input-order independent") {
  for (std::uint64_t seed : {5ull, 17ull, 99ull}) {
    CompatGraph g = random_graph(seed, 8, 0.5);
    Matching a = solve(g, Objective::sens());
    Matching b = solve(g, Objective::sens());
    CHECK(a.cycles == b.cycles);

    // Same graph content assembled in reversed edge order.
    auto edges = g.edge_list();
    std::reverse(edges.begin(), edges.end());
    CompatGraph g2 = graph_from_edges(g.records, edges);
    Matching c = solve(g2, Objective::sens());
    CHECK(a.cycles == c.cycles);
  }
}

TEST_CASE("weighted objective maximizes the given weights") {
  // Two disjoint 2-cycles with different weights; weight prefers the pair
  // {2,3} strongly enough to beat cardinality-style preferences.
  std::vector<PairRecord> recs{rec(0), rec(1), rec(2), rec(3), rec(4)};
  CompatGraph g = graph_from_edges(
      recs, {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {3, 4}, {4, 3}});
  auto w = [](const PairRecord& r) { return r.id >= 2 ? 10.0 : 1.0; };
  Matching m = solve(g, Objective::weighted(w));
  auto ids = m.matched_ids();
  // Best: {0,1} (2) + one of the heavy cycles (20) = 22.
  CHECK(ids.size() == 4);
  CHECK(std::count(ids.begin(), ids.end(), 0) == 1);
  double score = 0;
  for (PairId id : ids) score += w(g.records[g.index_of(id)]);
  CHECK(score == doctest::Approx(22.0));

  auto neg = [](const PairRecord&) { return -1.0; };
  CHECK_THROWS_AS(solve(g, Objective::weighted(neg)), std::invalid_argument);
  CHECK_THROWS_AS(solve(g, Objective::weighted(nullptr)),
                  std::invalid_argument);
}

TEST_CASE("matched counts recount the vertex list exactly") {
  CompatGraph g = random_graph(313, 8, 0.6);
  Matching m = solve(g, Objective::max_cardinality());
  MatchedCounts c = matched_counts(m, g);
  int total = 0, sens = 0, crit = 0;
  for (PairId id : m.matched_ids()) {
    const auto& r = g.records[g.index_of(id)];
    ++total;
    sens += r.highly_sensitized ? 1 : 0;
    crit += r.critical ? 1 : 0;
  }
  CHECK(c.total == total);
  CHECK(c.sensitized == sens);
  CHECK(c.critical == crit);
  CHECK(matched_counts(Matching{}, g) == MatchedCounts{});
}

TEST_CASE("batching stage semantics on hand-built instances") {
  // No critical, no sensitized: stages 1-3 empty, output = max cardinality.
  {
    CompatGraph g = random_graph(7, 6, 0.6, /*sens_p=*/0.0, /*crit_p=*/0.0);
    BatchedResult r = solve_batched_detailed(g);
    CHECK(r.stages[0].cycles.empty());
    CHECK(r.stages[1].cycles.empty());
    CHECK(r.stages[2].cycles.empty());
    auto direct = solve(g, Objective::max_cardinality());
    CHECK(r.combined().matched_ids() == direct.matched_ids());
  }
  // Critical-critical 2-cycle wins stage 1; the sensitized hanger-on that
  // could pair with one of them falls through to later stages.
  {
    std::vector<PairRecord> recs{rec(0, false, true), rec(1, false, true),
                                 rec(2, true, false)};
    CompatGraph g = graph_from_edges(
        recs, {{0, 1}, {1, 0}, {1, 2}, {2, 1}});
    BatchedResult r = solve_batched_detailed(g);
    REQUIRE(r.stages[0].cycles.size() == 1);
    CHECK(r.stages[0].cycles[0].verts == std::vector<PairId>{0, 1});
    CHECK(r.stages[1].cycles.empty());
    CHECK(r.stages[2].cycles.empty());
    CHECK(r.stages[3].cycles.empty());  // 2 alone has no partner left
  }
  // A leftover critical pair recruits a sensitized partner in stage 2.
  {
    std::vector<PairRecord> recs{rec(0, false, true), rec(1, true, false)};
    CompatGraph g = graph_from_edges(recs, {{0, 1}, {1, 0}});
    BatchedResult r = solve_batched_detailed(g);
    CHECK(r.stages[0].cycles.empty());  // no critical-critical cycle
    REQUIRE(r.stages[1].cycles.size() == 1);
    CHECK(r.stages[1].cycles[0].verts == std::vector<PairId>{0, 1});
  }
}

TEST_CASE("batching output is always a legal prioritized matching") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    CompatGraph g = random_graph(seed * 31 + 7, 4 + seed % 7, 0.5);
    BatchedResult r = solve_batched_detailed(g);
    Matching all = r.combined();
    CHECK(all.vertex_disjoint());

    std::set<PairId> critical, sensitized;
    for (const auto& rr : g.records) {
      if (rr.critical) critical.insert(rr.id);
      if (rr.highly_sensitized) sensitized.insert(rr.id);
    }
    // Stage 1 stays within the critical set.
    for (PairId id : r.stages[0].matched_ids()) CHECK(critical.count(id) == 1);
    // Stage 2 cycles each serve at least one stage-1-leftover critical pair.
    auto stage1 = r.stages[0].matched_ids();
    for (const auto& c : r.stages[1].cycles) {
      bool has_leftover_crit = false;
      for (PairId id : c.verts) {
        bool left = critical.count(id) == 1 &&
                    !std::binary_search(stage1.begin(), stage1.end(), id);
        has_leftover_crit = has_leftover_crit || left;
      }
      CHECK(has_leftover_crit);
    }
    // Stage 3 stays within the highly-sensitized set.
    for (PairId id : r.stages[2].matched_ids())
      CHECK(sensitized.count(id) == 1);
  }
}
