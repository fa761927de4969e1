#include "kexsim/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace kexsim {

BoundInputs BoundInputs::us_preset(double n) {
  BoundInputs b;
  b.n = n;
  b.mu_O = 0.44;
  b.mu_AB = 0.10;
  b.mu_H = 0.3;
  b.mu_C = 0.14;
  b.rho_C = 0.35;
  b.rho_NC = 0.25;
  b.eta_C = 0.09;
  return b;
}

BoundInputs BoundInputs::from_params(const ModelParams& p) {
  BoundInputs b;
  b.n = p.n;
  b.mu_O = p.mu(BloodType::O);
  b.mu_AB = p.mu(BloodType::AB);
  b.mu_H = p.mu_H;
  b.mu_C = p.mu_C;
  b.rho_C = p.rho_C;
  b.rho_NC = p.rho_NC;
  b.eta_C = p.eta_C;
  return b;
}

namespace {

void require_horizon(int tau) {
  if (tau < 0) throw std::invalid_argument("horizon must be >= 0");
}

}  // namespace

// Worst-case per-period loss of the sensitization-first rule at horizon tau.
// The stranded population is the highly-sensitized O-AB arrivals; the three
// components track how each cohort reaches period tau:
//   * arrived critical and survived every period since (rate rho_C),
//   * arrived non-critical, turned critical eta_C-many periods in,
//   * still non-critical at tau (rate rho_NC throughout).
// The tau = 0 period has no carryover, so only the arrived-critical and
// non-critical terms of the fresh cohort contribute.  All sums are evaluated
// directly; tau is small.
SensParts loss_sens_parts(const BoundInputs& b, int tau) {
  require_horizon(tau);
  const double muH = b.muH_OAB();
  SensParts parts;

  if (tau == 0) {
    parts.critical_carryover = b.rho_C * b.mu_C * muH;
    parts.became_critical = 0.0;
    parts.noncritical = b.rho_NC * (1.0 - b.mu_C) * muH;
    return parts;
  }

  // Cohort arriving critical at period tau-k, surviving k periods.
  double crit_sum = 0.0;
  for (int k = 0; k <= tau; ++k)
    crit_sum += b.mu_C * muH * std::pow(1.0 - b.rho_C, k);
  parts.critical_carryover = b.rho_C * crit_sum;

  // Cohort arriving non-critical that has turned critical: for every age k,
  // each earlier onset period j leaves (1-rho_C)^(tau-k) critical survival.
  double onset_sum = 0.0;
  for (int k = 0; k <= tau; ++k) {
    double inner = 0.0;
    for (int j = 0; j <= k; ++j)
      inner += (1.0 - b.mu_C) * muH * std::pow(1.0 - b.rho_NC, j);
    onset_sum += inner * std::pow(1.0 - b.rho_C, tau - k);
  }
  parts.became_critical = b.rho_C * b.eta_C * onset_sum;

  // Cohort still non-critical at tau.
  double noncrit_sum = 0.0;
  for (int k = 0; k <= tau; ++k)
    noncrit_sum += (1.0 - b.mu_C) * muH * std::pow(1.0 - b.rho_NC, k);
  parts.noncritical = b.rho_NC * noncrit_sum;

  return parts;
}

double loss_sens_bound(const BoundInputs& b, int tau) {
  return loss_sens_parts(b, tau).total();
}

// Worst-case per-period loss of the criticality-first rule: only the
// non-critical O-AB critical-arrival complement strands, perishing at
// rho_NC.  The same expression covers tau = 0 (single k = 0 term).
double loss_time_bound(const BoundInputs& b, int tau) {
  require_horizon(tau);
  const double muC = b.muC_OAB();
  double sum = 0.0;
  for (int k = 0; k <= tau; ++k)
    sum += muC * std::pow(1.0 - b.rho_NC, k);
  return b.rho_NC * sum;
}

TradeoffBound tradeoff_bound(const BoundInputs& b, int tau) {
  TradeoffBound t;
  t.denominator = loss_sens_bound(b, tau);
  t.numerator = t.denominator - loss_time_bound(b, tau);
  if (t.denominator == 0.0)
    throw std::domain_error("tradeoff undefined: zero sensitization-rule loss");
  t.ratio = t.numerator / t.denominator;
  return t;
}

std::vector<BoundRow> bound_series(const BoundInputs& b, int tau_max) {
  require_horizon(tau_max);
  std::vector<BoundRow> rows;
  rows.reserve(tau_max + 1);
  for (int tau = 0; tau <= tau_max; ++tau) {
    BoundRow row;
    row.tau = tau;
    row.sens_parts = loss_sens_parts(b, tau);
    row.sens_total = row.sens_parts.total();
    row.time_total = loss_time_bound(b, tau);
    row.numerator = row.sens_total - row.time_total;
    row.denominator = row.sens_total;
    row.ratio = row.denominator > 0.0 ? row.numerator / row.denominator
                                      : std::nan("");
    rows.push_back(row);
  }
  return rows;
}

std::vector<PublishedValue> published_comparison(const BoundInputs& b,
                                                 int tau) {
  // Compare coefficients of n: scale out whatever n the inputs carry.
  BoundInputs unit = b;
  unit.n = 1.0;
  const double sens = loss_sens_bound(unit, tau);
  const double time = loss_time_bound(unit, tau);

  auto entry = [](const char* name, double computed, double published) {
    PublishedValue v;
    v.name = name;
    v.computed = computed;
    v.published = published;
    v.rel_diff = published != 0.0
                     ? std::abs(computed - published) / std::abs(published)
                     : std::abs(computed);
    v.within_tolerance = v.rel_diff <= 0.01;
    return v;
  };

  std::vector<PublishedValue> out;
  out.push_back(entry("numerator", sens - time, kPublishedNumerator));
  out.push_back(entry("denominator", sens, kPublishedDenominator));
  out.push_back(
      entry("ratio", sens > 0.0 ? (sens - time) / sens : std::nan(""),
            kPublishedRatio));
  return out;
}

}  // namespace kexsim
