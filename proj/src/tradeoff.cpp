#include "kexsim/tradeoff.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "kexsim/config.hpp"

namespace kexsim {

namespace {

PairedLosses run_one(const ModelParams& p, Policy arm_sens, Policy arm_time,
                     int tau, std::uint64_t sub_seed, bool dense) {
  SimConfig cfg;
  cfg.params = p;
  cfg.tau = tau;
  cfg.seed = sub_seed;
  cfg.dense = dense;

  cfg.policy = arm_sens;
  double loss_sens = static_cast<double>(run(cfg).cumulative_realized_loss());
  cfg.policy = arm_time;
  double loss_time = static_cast<double>(run(cfg).cumulative_realized_loss());
  return {loss_sens, loss_time};
}

}  // namespace

std::vector<PairedLosses> paired_replications(const ModelParams& p,
                                              Policy arm_sens, Policy arm_time,
                                              int tau, int R,
                                              std::uint64_t seed, bool dense,
                                              int threads) {
  if (R < 1) throw std::invalid_argument("replication count must be >= 1");
  std::vector<PairedLosses> out(R);
  auto work = [&](int begin, int step) {
    for (int r = begin; r < R; r += step)
      out[r] = run_one(p, arm_sens, arm_time, tau, replication_seed(seed, r),
                       dense);
  };
  if (threads <= 1 || R == 1) {
    work(0, 1);
  } else {
    int nw = std::min(threads, R);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int i = 0; i < nw; ++i) pool.emplace_back(work, i, nw);
    for (auto& th : pool) th.join();
  }
  return out;
}

TradeoffEstimate summarize_paired(const std::vector<PairedLosses>& reps) {
  TradeoffEstimate est;
  est.replications = static_cast<int>(reps.size());

  double sum_sens = 0.0, sum_time = 0.0, sum_diff = 0.0, sum_diff2 = 0.0;
  double sum_ratio = 0.0, sum_ratio2 = 0.0;
  for (const auto& r : reps) {
    sum_sens += r.sens;
    sum_time += r.time;
    double d = r.sens - r.time;
    sum_diff += d;
    sum_diff2 += d * d;
    if (r.sens > 0.0) {
      double ratio = d / r.sens;
      sum_ratio += ratio;
      sum_ratio2 += ratio * ratio;
      ++est.used;
    } else {
      ++est.excluded;
    }
  }

  const double R = static_cast<double>(est.replications);
  est.mean_loss_sens = sum_sens / R;
  est.mean_loss_time = sum_time / R;
  est.mean_diff = sum_diff / R;
  if (est.replications >= 2) {
    double var = (sum_diff2 - sum_diff * sum_diff / R) / (R - 1.0);
    est.se_diff = std::sqrt(std::max(0.0, var) / R);
  }
  est.ratio_of_means = sum_sens > 0.0 ? (sum_sens - sum_time) / sum_sens : 0.0;

  if (est.used > 0) {
    const double U = static_cast<double>(est.used);
    est.mean = sum_ratio / U;
    if (est.used >= 2) {
      double var = (sum_ratio2 - sum_ratio * sum_ratio / U) / (U - 1.0);
      est.std_error = std::sqrt(std::max(0.0, var) / U);
    }
    est.ci_lo = est.mean - 1.959963984540054 * est.std_error;
    est.ci_hi = est.mean + 1.959963984540054 * est.std_error;
  }
  return est;
}

TradeoffEstimate estimate_tradeoff(const ModelParams& p, int tau, int R,
                                   std::uint64_t seed, bool dense, int threads,
                                   Policy arm_sens, Policy arm_time) {
  auto reps =
      paired_replications(p, arm_sens, arm_time, tau, R, seed, dense, threads);
  return summarize_paired(reps);
}

}  // namespace kexsim
