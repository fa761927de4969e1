#pragma once

#include <cstdint>
#include <vector>

#include "kexsim/sim.hpp"

namespace kexsim {

// Cumulative realized losses of the two policy arms for one replication,
// run on identical arrival/crossmatch streams.
struct PairedLosses {
  double sens = 0.0;
  double time = 0.0;
};

// Monte-Carlo estimate of the relative loss difference
// (L(SENS) - L(TIME)) / L(SENS) at horizon tau.
struct TradeoffEstimate {
  int replications = 0;  // requested R
  int used = 0;          // replications entering the ratio statistics
  int excluded = 0;      // zero SENS-loss replications dropped from the ratio

  // Per-replication ratio statistics (primary, mirrors the ratio form).
  double mean = 0.0;
  double std_error = 0.0;  // 0 when used < 2
  double ci_lo = 0.0;      // 95% normal interval; equals mean when used < 2
  double ci_hi = 0.0;

  // Ratio of mean losses across all R replications (robustness companion).
  double ratio_of_means = 0.0;

  // Arm means and the paired difference (SENS - TIME) over all R.
  double mean_loss_sens = 0.0;
  double mean_loss_time = 0.0;
  double mean_diff = 0.0;
  double se_diff = 0.0;
};

// Runs both arms for replications 0..R-1.  Replication r derives its own
// sub-seed from `seed`, so results for a given r never depend on R, and both
// arms of a replication share that sub-seed (identical arrivals and
// crossmatch outcomes).  `threads` > 1 distributes replications across
// worker threads; results are identical to sequential execution.
std::vector<PairedLosses> paired_replications(const ModelParams& p,
                                              Policy arm_sens, Policy arm_time,
                                              int tau, int R,
                                              std::uint64_t seed, bool dense,
                                              int threads = 1);

TradeoffEstimate estimate_tradeoff(const ModelParams& p, int tau, int R,
                                   std::uint64_t seed, bool dense = false,
                                   int threads = 1,
                                   Policy arm_sens = Policy::Sens,
                                   Policy arm_time = Policy::Time);

TradeoffEstimate summarize_paired(const std::vector<PairedLosses>& reps);

}  // namespace kexsim
