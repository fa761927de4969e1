#include "kexsim/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

namespace kexsim {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_config_block(std::ostream& out, const ExperimentConfig& cfg) {
  std::ostringstream body;
  dump_config(body, cfg);
  std::istringstream lines(body.str());
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << "\n";
}

void write_run_csv(std::ostream& out, const RunReport& report,
                   const ExperimentConfig& cfg) {
  out << "# schema: " << kStepsSchema << "\n";
  write_config_block(out, cfg);
  out << "t,arrivals,matched_total,matched_sensitized,matched_critical,"
         "perished_critical,perished_noncritical,became_critical,"
         "expected_loss,realized_loss,pool_size\n";
  for (const auto& s : report.steps) {
    out << s.t << ',' << s.arrivals << ',' << s.matched_total << ','
        << s.matched_sensitized << ',' << s.matched_critical << ','
        << s.perished_critical << ',' << s.perished_noncritical << ','
        << s.became_critical << ',' << format_double(s.expected_loss) << ','
        << s.realized_loss << ',' << s.pool_size << "\n";
  }
  out << "# cumulative_expected_loss="
      << format_double(report.cumulative_expected_loss()) << "\n";
  out << "# cumulative_realized_loss=" << report.cumulative_realized_loss()
      << "\n";
  out << "# total_matched=" << report.total_matched() << "\n";
  out << "# total_arrivals=" << report.total_arrivals() << "\n";
}

void write_run_summary(std::ostream& out, const RunReport& report,
                       const ExperimentConfig& cfg) {
  write_config_block(out, cfg);
  out << "algorithm=" << report.algorithm << "\n";
  out << "horizon=" << report.horizon << "\n";
  out << "steps=" << report.steps.size() << "\n";
  out << "total_arrivals=" << report.total_arrivals() << "\n";
  out << "total_matched=" << report.total_matched() << "\n";
  out << "cumulative_expected_loss="
      << format_double(report.cumulative_expected_loss()) << "\n";
  out << "cumulative_realized_loss=" << report.cumulative_realized_loss()
      << "\n";
  if (!report.steps.empty())
    out << "final_pool_size=" << report.steps.back().pool_size << "\n";
}

void write_bound_csv(std::ostream& out, const BoundInputs& b, int tau_max,
                     int comparison_tau, double absolute_n) {
  out << "# schema: " << kBoundsSchema << "\n";
  out << "# n=" << format_double(b.n) << " mu_O=" << format_double(b.mu_O)
      << " mu_AB=" << format_double(b.mu_AB) << " mu_H=" << format_double(b.mu_H)
      << " mu_C=" << format_double(b.mu_C) << " rho_C=" << format_double(b.rho_C)
      << " rho_NC=" << format_double(b.rho_NC)
      << " eta_C=" << format_double(b.eta_C) << "\n";
  out << "# muH_OAB=" << format_double(b.muH_OAB())
      << " muC_OAB=" << format_double(b.muC_OAB()) << "\n";
  out << "tau,sens_critical_carryover,sens_became_critical,sens_noncritical,"
         "sens_total,time_total,numerator,denominator,ratio\n";
  for (const auto& row : bound_series(b, tau_max)) {
    out << row.tau << ',' << format_double(row.sens_parts.critical_carryover)
        << ',' << format_double(row.sens_parts.became_critical) << ','
        << format_double(row.sens_parts.noncritical) << ','
        << format_double(row.sens_total) << ',' << format_double(row.time_total)
        << ',' << format_double(row.numerator) << ','
        << format_double(row.denominator) << ',' << format_double(row.ratio)
        << "\n";
  }
  if (absolute_n > 0.0) {
    BoundInputs abs = b;
    abs.n = absolute_n;
    out << "# absolute at n=" << format_double(absolute_n) << ", horizon "
        << tau_max << ": sens_total="
        << format_double(loss_sens_bound(abs, tau_max))
        << " time_total=" << format_double(loss_time_bound(abs, tau_max))
        << "\n";
  }
  if (tau_max >= comparison_tau) {
    out << "# published-estimate comparison (coefficients of n, horizon "
        << comparison_tau << ")\n";
    for (const auto& v : published_comparison(b, comparison_tau)) {
      out << "# " << v.name << ": computed=" << format_double(v.computed)
          << " published=" << format_double(v.published)
          << " rel_diff=" << format_double(v.rel_diff) << " "
          << (v.within_tolerance ? "OK" : "MISMATCH") << "\n";
    }
  }
}

void write_tradeoff_report(std::ostream& out, const BoundInputs& b,
                           const TradeoffEstimate& est,
                           const ExperimentConfig& cfg) {
  write_config_block(out, cfg);

  out << "analytic_numerator_coeff=";
  BoundInputs unit = b;
  unit.n = 1.0;
  double sens = loss_sens_bound(unit, cfg.tau);
  double time = loss_time_bound(unit, cfg.tau);
  out << format_double(sens - time) << "\n";
  out << "analytic_denominator_coeff=" << format_double(sens) << "\n";
  out << "analytic_ratio="
      << format_double(sens > 0.0 ? (sens - time) / sens : std::nan(""))
      << "\n";

  out << "replications=" << est.replications << "\n";
  out << "used=" << est.used << "\n";
  out << "excluded_zero_denominator=" << est.excluded << "\n";
  out << "empirical_mean_ratio=" << format_double(est.mean) << "\n";
  if (est.used >= 2) {
    out << "empirical_std_error=" << format_double(est.std_error) << "\n";
    out << "empirical_ci95_lo=" << format_double(est.ci_lo) << "\n";
    out << "empirical_ci95_hi=" << format_double(est.ci_hi) << "\n";
  } else {
    out << "# confidence interval omitted: fewer than 2 usable replications\n";
  }
  out << "empirical_ratio_of_means=" << format_double(est.ratio_of_means)
      << "\n";
  out << "mean_loss_sens=" << format_double(est.mean_loss_sens) << "\n";
  out << "mean_loss_time=" << format_double(est.mean_loss_time) << "\n";
  out << "mean_diff=" << format_double(est.mean_diff) << "\n";
  out << "se_diff=" << format_double(est.se_diff) << "\n";
}

}  // namespace kexsim
