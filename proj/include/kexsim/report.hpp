#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kexsim/bounds.hpp"
#include "kexsim/config.hpp"
#include "kexsim/sim.hpp"
#include "kexsim/tradeoff.hpp"

namespace kexsim {

// Deterministic text emission.  Nothing here writes timestamps or any other
// run-varying data, so identical inputs give byte-identical output.

// Shortest round-trippable decimal representation of a double.
std::string format_double(double v);

inline constexpr const char* kStepsSchema = "kexsim.steps.v1";
inline constexpr const char* kBoundsSchema = "kexsim.bounds.v1";

// Per-period CSV: schema line, config comment block, header row, one row per
// StepReport, then a summary comment block.
void write_run_csv(std::ostream& out, const RunReport& report,
                   const ExperimentConfig& cfg);

// Condensed run report: config block plus cumulative totals only.
void write_run_summary(std::ostream& out, const RunReport& report,
                       const ExperimentConfig& cfg);

// Horizon table CSV with the published-estimate comparison appended as a
// comment block when the table covers the comparison horizon.  Rows use `b`
// as given (pass n=1 for coefficient form); a positive `absolute_n` adds a
// comment block with the final-horizon bounds scaled to that pool size.
void write_bound_csv(std::ostream& out, const BoundInputs& b, int tau_max,
                     int comparison_tau = 10, double absolute_n = 0.0);

// Analytic bound and Monte-Carlo estimate side by side.
void write_tradeoff_report(std::ostream& out, const BoundInputs& b,
                           const TradeoffEstimate& est,
                           const ExperimentConfig& cfg);

// The `key=value` comment block shared by all reports.
void write_config_block(std::ostream& out, const ExperimentConfig& cfg);

}  // namespace kexsim
