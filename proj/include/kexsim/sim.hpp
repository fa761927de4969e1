#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kexsim/batched.hpp"
#include "kexsim/crossmatch.hpp"
#include "kexsim/params.hpp"
#include "kexsim/pool.hpp"
#include "kexsim/solver.hpp"

namespace kexsim {

// Matching rule applied each period.
enum class Policy { MaxCardinality, Sens, Time, Batched };

const char* to_string(Policy p);
std::optional<Policy> policy_from_string(std::string_view s);

struct SimConfig {
  ModelParams params;
  Policy policy = Policy::MaxCardinality;
  int tau = 10;              // horizon; steps run for t = 0..tau
  std::uint64_t seed = 0;
  bool dense = false;        // skip tissue draws on edges (ABO-only graph)
  int warm_pool = 0;         // extra pairs injected before step 0 (off by default)
};

// Everything observable about one period.
struct StepReport {
  int t = 0;
  int arrivals = 0;
  int matched_total = 0;
  int matched_sensitized = 0;
  int matched_critical = 0;
  int perished_critical = 0;
  int perished_noncritical = 0;
  int became_critical = 0;
  // rho_C * (unmatched critical) + rho_NC * (unmatched non-critical),
  // evaluated on the post-match pool before perishing is sampled.
  double expected_loss = 0.0;
  int realized_loss = 0;  // sampled perish count this period
  int pool_size = 0;      // actives after the full period
};

struct RunReport {
  std::string algorithm;
  int horizon = 0;
  std::uint64_t seed = 0;
  std::vector<StepReport> steps;  // size horizon+1

  double cumulative_expected_loss() const;
  std::int64_t cumulative_realized_loss() const;
  std::int64_t total_matched() const;
  std::int64_t total_arrivals() const;
};

// One simulation run with inspectable state between steps.  Period order:
// arrivals join; graph is built; the policy's matching is applied and matched
// pairs leave; expected loss is recorded and perishing is sampled on the
// remainder; surviving non-critical pairs may turn critical (affecting the
// next period).
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);

  StepReport step();

  const PoolState& pool() const { return pool_; }
  const SimConfig& config() const { return cfg_; }
  const CrossmatchOracle& oracle() const { return oracle_; }
  int next_t() const { return pool_.t; }

 private:
  Matching match(const CompatGraph& g) const;

  SimConfig cfg_;
  CrossmatchOracle oracle_;
  PoolState pool_;
  PairId next_id_ = 0;
};

// Steps 0..tau from an empty pool; reproducible from the seed.
RunReport run(const SimConfig& cfg);

}  // namespace kexsim
