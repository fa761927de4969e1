#include "kexsim/sim.hpp"

#include <stdexcept>

#include "kexsim/arrivals.hpp"
#include "kexsim/graph.hpp"
#include "kexsim/rng.hpp"

namespace kexsim {

const char* to_string(Policy p) {
  switch (p) {
    case Policy::MaxCardinality: return "maxcard";
    case Policy::Sens: return "sens";
    case Policy::Time: return "time";
    case Policy::Batched: return "batched";
  }
  return "?";
}

std::optional<Policy> policy_from_string(std::string_view s) {
  if (s == "maxcard" || s == "max-cardinality") return Policy::MaxCardinality;
  if (s == "sens") return Policy::Sens;
  if (s == "time") return Policy::Time;
  if (s == "batched") return Policy::Batched;
  return std::nullopt;
}

double RunReport::cumulative_expected_loss() const {
  double sum = 0.0;
  for (const auto& s : steps) sum += s.expected_loss;
  return sum;
}

std::int64_t RunReport::cumulative_realized_loss() const {
  std::int64_t sum = 0;
  for (const auto& s : steps) sum += s.realized_loss;
  return sum;
}

std::int64_t RunReport::total_matched() const {
  std::int64_t sum = 0;
  for (const auto& s : steps) sum += s.matched_total;
  return sum;
}

std::int64_t RunReport::total_arrivals() const {
  std::int64_t sum = 0;
  for (const auto& s : steps) sum += s.arrivals;
  return sum;
}

Simulation::Simulation(const SimConfig& cfg)
    : cfg_(cfg), oracle_(cfg.seed, cfg.dense) {
  validate_params(cfg_.params);  // throws on structural violations
  if (cfg_.tau < 0) throw std::invalid_argument("tau must be >= 0");
  if (cfg_.warm_pool > 0) {
    // Optional pre-seeded pool, drawn like arrivals at period -1 with a
    // fixed count.
    ModelParams warm = cfg_.params;
    warm.n = cfg_.warm_pool;
    warm.arrivals = ArrivalModel::Fixed;
    pool_.add_arrivals(generate_arrivals(warm, -1, cfg_.seed, &next_id_));
  }
}

Matching Simulation::match(const CompatGraph& g) const {
  switch (cfg_.policy) {
    case Policy::MaxCardinality:
      return solve(g, Objective::max_cardinality(), cfg_.params.k_max);
    case Policy::Sens:
      return solve(g, Objective::sens(), cfg_.params.k_max);
    case Policy::Time:
      return solve(g, Objective::time(), cfg_.params.k_max);
    case Policy::Batched:
      return solve_batched(g, cfg_.params.k_max);
  }
  throw std::logic_error("unknown policy");
}

StepReport Simulation::step() {
  const int t = pool_.t;
  StepReport rep;
  rep.t = t;

  // 1. Arrivals join the pool.
  auto entrants = generate_arrivals(cfg_.params, t, cfg_.seed, &next_id_);
  rep.arrivals = static_cast<int>(entrants.size());
  pool_.add_arrivals(std::move(entrants));

  // 2-3. Build the compatibility graph and apply the matching policy.
  CompatGraph g = build_graph(pool_, oracle_);
  Matching m = match(g);
  MatchedCounts counts = matched_counts(m, g);
  rep.matched_total = counts.total;
  rep.matched_sensitized = counts.sensitized;
  rep.matched_critical = counts.critical;
  auto matched_ids = m.matched_ids();
  pool_.mark_matched(matched_ids, t);

  // 4. Expected loss on the post-match pool, then sampled perishing.
  // Draws are keyed by (pair id, period): reproducible regardless of pool
  // iteration order.
  int unmatched_crit = 0, unmatched_noncrit = 0;
  std::vector<PairId> perish;
  for (const auto& r : pool_.active) {
    if (r.critical) ++unmatched_crit; else ++unmatched_noncrit;
    double rate = r.critical ? cfg_.params.rho_C : cfg_.params.rho_NC;
    double u = keyed_unit(cfg_.seed, RngTag::Perish, r.id,
                          static_cast<std::uint64_t>(t));
    if (u < rate) {
      perish.push_back(r.id);
      if (r.critical) ++rep.perished_critical; else ++rep.perished_noncritical;
    }
  }
  rep.expected_loss = cfg_.params.rho_C * unmatched_crit +
                      cfg_.params.rho_NC * unmatched_noncrit;
  for (PairId id : perish) pool_.mark_perished(id, t);
  rep.realized_loss = rep.perished_critical + rep.perished_noncritical;

  // 5. Criticality onset among the survivors (visible from next period).
  for (auto& r : pool_.active) {
    if (r.critical) continue;
    double u = keyed_unit(cfg_.seed, RngTag::Criticality, r.id,
                          static_cast<std::uint64_t>(t));
    if (u < cfg_.params.eta_C) {
      r.critical = true;
      ++rep.became_critical;
    }
  }

  rep.pool_size = static_cast<int>(pool_.active.size());
  pool_.t = t + 1;
  return rep;
}

RunReport run(const SimConfig& cfg) {
  Simulation sim(cfg);
  RunReport report;
  report.algorithm = to_string(cfg.policy);
  report.horizon = cfg.tau;
  report.seed = cfg.seed;
  report.steps.reserve(cfg.tau + 1);
  for (int t = 0; t <= cfg.tau; ++t) report.steps.push_back(sim.step());
  return report;
}

}  // namespace kexsim
