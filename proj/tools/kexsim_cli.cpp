// Command-line front end: simulate / bound / tradeoff / solve.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 runtime error
// (unreadable/unwritable files).  Output is deterministic given the flags
// and seed; KEXSIM_OUT_DIR prefixes relative --out paths.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kexsim/bounds.hpp"
#include "kexsim/config.hpp"
#include "kexsim/instance_io.hpp"
#include "kexsim/report.hpp"
#include "kexsim/sim.hpp"
#include "kexsim/solver.hpp"
#include "kexsim/tradeoff.hpp"

namespace {

using namespace kexsim;

constexpr const char* kOutDirEnv = "KEXSIM_OUT_DIR";

std::string resolve_out(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_absolute()) return out;
  const char* dir = std::getenv(kOutDirEnv);
  if (!dir || !*dir) return out;
  return (std::filesystem::path(dir) / p).string();
}

// Renders to stdout or --out; returns the process exit code.
int emit(const std::string& out, const std::string& body) {
  if (out.empty()) {
    std::cout << body;
    return 0;
  }
  std::string path = resolve_out(out);
  std::ofstream f(path);
  if (!f) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return 2;
  }
  f << body;
  f.flush();
  if (!f) {
    std::cerr << "error: failed writing output file: " << path << "\n";
    return 2;
  }
  return 0;
}

// Flags shared by the experiment subcommands.  Values are applied on top of
// preset and config file only when actually passed (precedence: flags over
// config file over preset).
struct CommonFlags {
  std::string preset;
  std::string config_file;
  std::vector<std::string> sets;
  std::string policy;
  int tau = 0;
  int reps = 0;
  std::uint64_t seed = 0;
  double n = 0.0;
  bool dense = false;
  int threads = 0;
  int warm_pool = 0;
  std::string mode;
  std::string out;
  bool dump = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags* f, bool with_sim_flags) {
  cmd->add_option("--preset", f->preset, "parameter preset (us-2017)");
  cmd->add_option("--config", f->config_file, "key=value config file");
  cmd->add_option("--set", f->sets, "extra key=value override (repeatable)");
  cmd->add_option("--tau", f->tau, "horizon (steps 0..tau)");
  cmd->add_option("--n", f->n, "mean arrivals per step");
  cmd->add_option("--out", f->out, "output path (default: stdout)");
  cmd->add_flag("--dump-config", f->dump,
                "print the resolved config and exit");
  if (with_sim_flags) {
    cmd->add_option("--seed", f->seed, "master random seed");
    cmd->add_flag("--dense", f->dense,
                  "ABO-only edges (skip tissue draws on edges)");
  }
}

ExperimentConfig resolve_config(const CLI::App* cmd, const CommonFlags& f) {
  auto passed = [&](const char* name) {
    const CLI::Option* o = cmd->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  ExperimentConfig cfg = preset_config(
      passed("--preset") ? f.preset : std::string("us-2017"));
  if (passed("--config"))
    cfg = load_config_file(f.config_file, std::move(cfg));
  for (const auto& kv : f.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (passed("--policy")) {
    auto p = policy_from_string(f.policy);
    if (!p) throw std::invalid_argument("unknown policy: " + f.policy);
    cfg.policy = *p;
  }
  if (passed("--tau")) {
    if (f.tau < 0) throw std::invalid_argument("tau must be >= 0");
    cfg.tau = f.tau;
  }
  if (passed("--reps")) {
    if (f.reps < 1) throw std::invalid_argument("reps must be >= 1");
    cfg.reps = f.reps;
  }
  if (passed("--seed")) cfg.seed = f.seed;
  if (passed("--n")) {
    if (!(f.n > 0.0)) throw std::invalid_argument("n must be positive");
    cfg.params.n = f.n;
  }
  if (passed("--dense")) cfg.dense = f.dense;
  if (passed("--threads")) {
    if (f.threads < 0) throw std::invalid_argument("threads must be >= 0");
    cfg.threads = f.threads;
  }
  if (passed("--warm-pool")) {
    if (f.warm_pool < 0) throw std::invalid_argument("warm-pool must be >= 0");
    cfg.warm_pool = f.warm_pool;
  }
  if (passed("--mode")) {
    auto m = output_mode_from_string(f.mode);
    if (!m) throw std::invalid_argument("unknown mode: " + f.mode);
    cfg.mode = *m;
  }
  if (passed("--out")) cfg.out = f.out;
  return cfg;
}

int maybe_dump(const CommonFlags& f, const ExperimentConfig& cfg) {
  if (!f.dump) return -1;
  std::ostringstream body;
  dump_config(body, cfg);
  return emit(cfg.out, body.str());
}

int cmd_simulate(const CLI::App* cmd, const CommonFlags& f) {
  ExperimentConfig cfg = resolve_config(cmd, f);
  if (int rc = maybe_dump(f, cfg); rc >= 0) return rc;
  if (cfg.mode == OutputMode::Bounds)
    throw std::invalid_argument("simulate supports modes per-step and summary");
  RunReport report = run(cfg.sim_config());
  std::ostringstream body;
  if (cfg.mode == OutputMode::Summary)
    write_run_summary(body, report, cfg);
  else
    write_run_csv(body, report, cfg);
  return emit(cfg.out, body.str());
}

int cmd_bound(const CLI::App* cmd, const CommonFlags& f) {
  ExperimentConfig cfg = resolve_config(cmd, f);
  if (int rc = maybe_dump(f, cfg); rc >= 0) return rc;
  BoundInputs b = BoundInputs::from_params(cfg.params);
  b.n = 1.0;  // table rows are coefficients of n
  std::ostringstream body;
  write_bound_csv(body, b, cfg.tau, 10, cfg.params.n);
  return emit(cfg.out, body.str());
}

int cmd_tradeoff(const CLI::App* cmd, const CommonFlags& f) {
  ExperimentConfig cfg = resolve_config(cmd, f);
  if (int rc = maybe_dump(f, cfg); rc >= 0) return rc;
  TradeoffEstimate est =
      estimate_tradeoff(cfg.params, cfg.tau, cfg.reps, cfg.seed, cfg.dense,
                        cfg.effective_threads());
  std::ostringstream body;
  write_tradeoff_report(body, BoundInputs::from_params(cfg.params), est, cfg);
  return emit(cfg.out, body.str());
}

int cmd_solve(const std::string& instance_path, const std::string& objective,
              const std::string& out) {
  CompatGraph g = load_instance_file(instance_path);
  Matching m;
  const char* label = objective.c_str();
  if (objective == "maxcard") m = solve(g, Objective::max_cardinality());
  else if (objective == "sens") m = solve(g, Objective::sens());
  else if (objective == "time") m = solve(g, Objective::time());
  else if (objective == "batched") m = solve_batched(g);
  else throw std::invalid_argument("unknown objective: " + objective);

  MatchedCounts counts = matched_counts(m, g);
  std::ostringstream body;
  body << "# schema: kexsim.matching.v1\n";
  body << "# objective: " << label << "\n";
  body << "# vertices=" << g.vertex_count() << " edges=" << g.edge_count()
       << "\n";
  for (const auto& c : m.cycles) {
    body << "cycle";
    for (PairId id : c.verts) body << ' ' << id;
    body << "\n";
  }
  body << "# matched_total=" << counts.total
       << " matched_sensitized=" << counts.sensitized
       << " matched_critical=" << counts.critical << "\n";
  return emit(out, body.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kidney-exchange simulator, exact matcher, and loss bounds"};
  app.require_subcommand(1);

  CommonFlags sim_f, bound_f, trade_f;

  CLI::App* sim = app.add_subcommand(
      "simulate", "run the dynamic pool simulation and emit per-step CSV");
  add_common_flags(sim, &sim_f, true);
  sim->add_option("--policy", sim_f.policy,
                  "matching policy: maxcard|sens|time|batched");
  sim->add_option("--mode", sim_f.mode, "output mode: per-step|summary");
  sim->add_option("--warm-pool", sim_f.warm_pool,
                  "pairs pre-seeded before step 0");

  CLI::App* bound = app.add_subcommand(
      "bound", "evaluate the closed-form loss bounds over tau = 0..T");
  add_common_flags(bound, &bound_f, false);

  CLI::App* trade = app.add_subcommand(
      "tradeoff", "analytic vs. Monte-Carlo fairness tradeoff at horizon tau");
  add_common_flags(trade, &trade_f, true);
  trade->add_option("--reps", trade_f.reps, "Monte-Carlo replications");
  trade->add_option("--threads", trade_f.threads,
                    "worker threads (0 = machine parallelism)");

  std::string instance_path, solve_objective = "maxcard", solve_out;
  CLI::App* slv = app.add_subcommand(
      "solve", "solve one instance file and print the optimal matching");
  slv->add_option("instance", instance_path, "instance file (text format)")
      ->required();
  slv->add_option("--objective", solve_objective,
                  "maxcard|sens|time|batched");
  slv->add_option("--out", solve_out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run with --help for usage\n";
    return 1;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim, sim_f);
    if (bound->parsed()) return cmd_bound(bound, bound_f);
    if (trade->parsed()) return cmd_tradeoff(trade, trade_f);
    if (slv->parsed())
      return cmd_solve(instance_path, solve_objective, solve_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
