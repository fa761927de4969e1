#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "kexsim/rng.hpp"
#include "kexsim/sim.hpp"

namespace kexsim {

enum class OutputMode { PerStep, Summary, Bounds };

const char* to_string(OutputMode m);
std::optional<OutputMode> output_mode_from_string(std::string_view s);

// Fully resolved experiment description.  Resolution order: preset defaults,
// then config-file entries, then command-line flags (last writer wins).
struct ExperimentConfig {
  std::string preset = "us-2017";
  ModelParams params;  // resolved from preset, then overridden key by key
  Policy policy = Policy::MaxCardinality;
  int tau = 10;
  int reps = 100;
  std::uint64_t seed = 0;
  bool dense = false;
  int threads = 0;  // 0 = machine parallelism
  int warm_pool = 0;
  OutputMode mode = OutputMode::PerStep;
  std::string out;  // output path; empty = stdout

  SimConfig sim_config() const;
  int effective_threads() const;
};

// Config with the given preset's parameters ("us-2017" is the only built-in).
// Unknown preset names throw std::invalid_argument.
ExperimentConfig preset_config(const std::string& preset = "us-2017");

// Applies one `key=value` entry; throws std::invalid_argument on unknown keys
// or unparsable values.  Accepted keys: preset, policy, tau, reps, seed, n,
// dense, threads, warm_pool, mode, out, arrivals, k_max, mu_O, mu_A, mu_B,
// mu_AB, mu_H, mu_C, gamma_H, gamma_L, sigma, rho_C, rho_NC, eta_C.
void apply_key_value(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);

// Plain-text config: one key=value per line; '#' starts a comment.
ExperimentConfig load_config(std::istream& in, ExperimentConfig base);
ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base);

// Writes every key apply_key_value understands; load(dump(cfg)) == cfg.
void dump_config(std::ostream& out, const ExperimentConfig& cfg);

// Sub-seed for replication r: pure function of (master seed, r), so earlier
// replications are unaffected when R grows.
inline std::uint64_t replication_seed(std::uint64_t master, int replication) {
  return derive_seed(master, RngTag::Replication,
                     static_cast<std::uint64_t>(replication));
}

}  // namespace kexsim
