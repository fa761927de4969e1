#include "kexsim/config.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace kexsim {

const char* to_string(OutputMode m) {
  switch (m) {
    case OutputMode::PerStep: return "per-step";
    case OutputMode::Summary: return "summary";
    case OutputMode::Bounds: return "bounds";
  }
  return "?";
}

std::optional<OutputMode> output_mode_from_string(std::string_view s) {
  if (s == "per-step" || s == "steps") return OutputMode::PerStep;
  if (s == "summary") return OutputMode::Summary;
  if (s == "bounds") return OutputMode::Bounds;
  return std::nullopt;
}

SimConfig ExperimentConfig::sim_config() const {
  SimConfig s;
  s.params = params;
  s.policy = policy;
  s.tau = tau;
  s.seed = seed;
  s.dense = dense;
  s.warm_pool = warm_pool;
  return s;
}

int ExperimentConfig::effective_threads() const {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

ExperimentConfig preset_config(const std::string& preset) {
  if (preset != "us-2017")
    throw std::invalid_argument("unknown preset: " + preset);
  ExperimentConfig cfg;
  cfg.preset = preset;
  cfg.params = ModelParams::us_2017();
  return cfg;
}

namespace {

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on")
    return true;
  if (value == "0" || value == "false" || value == "no" || value == "off")
    return false;
  throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
}

void set_mu(ExperimentConfig& cfg, BloodType t, double v) {
  cfg.params.mu_blood[static_cast<std::size_t>(t)] = v;
}

// Shortest round-trippable decimal form.
std::string real_str(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void apply_key_value(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "preset") {
    // Re-resolving a preset keeps already-applied overrides; config files
    // should list `preset` first if they use it.
    ExperimentConfig fresh = preset_config(value);
    cfg.preset = fresh.preset;
    cfg.params = fresh.params;
  } else if (key == "policy") {
    auto p = policy_from_string(value);
    if (!p) throw std::invalid_argument("unknown policy: " + value);
    cfg.policy = *p;
  } else if (key == "tau") {
    long long v = parse_int(key, value);
    if (v < 0) throw std::invalid_argument("tau must be >= 0");
    cfg.tau = static_cast<int>(v);
  } else if (key == "reps") {
    long long v = parse_int(key, value);
    if (v < 1) throw std::invalid_argument("reps must be >= 1");
    cfg.reps = static_cast<int>(v);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "n") {
    cfg.params.n = parse_real(key, value);
  } else if (key == "dense") {
    cfg.dense = parse_bool(key, value);
  } else if (key == "threads") {
    long long v = parse_int(key, value);
    if (v < 0) throw std::invalid_argument("threads must be >= 0");
    cfg.threads = static_cast<int>(v);
  } else if (key == "warm_pool") {
    long long v = parse_int(key, value);
    if (v < 0) throw std::invalid_argument("warm_pool must be >= 0");
    cfg.warm_pool = static_cast<int>(v);
  } else if (key == "mode") {
    auto m = output_mode_from_string(value);
    if (!m) throw std::invalid_argument("unknown mode: " + value);
    cfg.mode = *m;
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "arrivals") {
    if (value == "poisson") cfg.params.arrivals = ArrivalModel::Poisson;
    else if (value == "fixed") cfg.params.arrivals = ArrivalModel::Fixed;
    else throw std::invalid_argument("arrivals must be poisson or fixed");
  } else if (key == "k_max") {
    cfg.params.k_max = static_cast<int>(parse_int(key, value));
  } else if (key == "mu_O") {
    set_mu(cfg, BloodType::O, parse_real(key, value));
  } else if (key == "mu_A") {
    set_mu(cfg, BloodType::A, parse_real(key, value));
  } else if (key == "mu_B") {
    set_mu(cfg, BloodType::B, parse_real(key, value));
  } else if (key == "mu_AB") {
    set_mu(cfg, BloodType::AB, parse_real(key, value));
  } else if (key == "mu_H") {
    cfg.params.mu_H = parse_real(key, value);
  } else if (key == "mu_C") {
    cfg.params.mu_C = parse_real(key, value);
  } else if (key == "gamma_H") {
    cfg.params.gamma_H = parse_real(key, value);
  } else if (key == "gamma_L") {
    cfg.params.gamma_L = parse_real(key, value);
  } else if (key == "sigma") {
    cfg.params.sigma = parse_real(key, value);
  } else if (key == "rho_C") {
    cfg.params.rho_C = parse_real(key, value);
  } else if (key == "rho_NC") {
    cfg.params.rho_NC = parse_real(key, value);
  } else if (key == "eta_C") {
    cfg.params.eta_C = parse_real(key, value);
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

ExperimentConfig load_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    auto end = line.find_last_not_of(" \t\r");
    std::string body = line.substr(start, end - start + 1);
    auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected key=value, got '" + body + "'");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{}
                                    : s.substr(b, e - b + 1);
    };
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    try {
      apply_key_value(base, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return load_config(in, std::move(base));
}

void dump_config(std::ostream& out, const ExperimentConfig& cfg) {
  std::ostringstream s;
  s << "preset=" << cfg.preset << "\n";
  s << "policy=" << to_string(cfg.policy) << "\n";
  s << "tau=" << cfg.tau << "\n";
  s << "reps=" << cfg.reps << "\n";
  s << "seed=" << cfg.seed << "\n";
  s << "n=" << real_str(cfg.params.n) << "\n";
  s << "dense=" << (cfg.dense ? 1 : 0) << "\n";
  s << "threads=" << cfg.threads << "\n";
  s << "warm_pool=" << cfg.warm_pool << "\n";
  s << "mode=" << to_string(cfg.mode) << "\n";
  if (!cfg.out.empty()) s << "out=" << cfg.out << "\n";
  s << "arrivals="
    << (cfg.params.arrivals == ArrivalModel::Fixed ? "fixed" : "poisson")
    << "\n";
  s << "k_max=" << cfg.params.k_max << "\n";
  s << "mu_O=" << real_str(cfg.params.mu(BloodType::O)) << "\n";
  s << "mu_A=" << real_str(cfg.params.mu(BloodType::A)) << "\n";
  s << "mu_B=" << real_str(cfg.params.mu(BloodType::B)) << "\n";
  s << "mu_AB=" << real_str(cfg.params.mu(BloodType::AB)) << "\n";
  s << "mu_H=" << real_str(cfg.params.mu_H) << "\n";
  s << "mu_C=" << real_str(cfg.params.mu_C) << "\n";
  s << "gamma_H=" << real_str(cfg.params.gamma_H) << "\n";
  s << "gamma_L=" << real_str(cfg.params.gamma_L) << "\n";
  s << "sigma=" << real_str(cfg.params.sigma) << "\n";
  s << "rho_C=" << real_str(cfg.params.rho_C) << "\n";
  s << "rho_NC=" << real_str(cfg.params.rho_NC) << "\n";
  s << "eta_C=" << real_str(cfg.params.eta_C) << "\n";
  out << s.str();
}

}  // namespace kexsim
