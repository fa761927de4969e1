#pragma once

#include <vector>

#include "kexsim/params.hpp"

namespace kexsim {

// Inputs to the closed-form loss bounds.  Only the blood/criticality margins
// enter the formulas; crossmatch parameters never do.
struct BoundInputs {
  double n = 1.0;  // report coefficients of n by leaving this at 1
  double mu_O = 0.0;
  double mu_AB = 0.0;
  double mu_H = 0.0;
  double mu_C = 0.0;
  double rho_C = 0.0;
  double rho_NC = 0.0;
  double eta_C = 0.0;

  // Expected highly-sensitized / critical O-AB arrivals per period.
  // Recomputed on use, never cached.
  double muH_OAB() const { return n * mu_O * mu_AB * mu_H; }
  double muC_OAB() const { return n * mu_O * mu_AB * mu_C; }

  static BoundInputs us_preset(double n = 1.0);
  static BoundInputs from_params(const ModelParams& p);
};

// The bound on the sensitization-first rule's per-period loss splits into
// three non-negative components.
struct SensParts {
  double critical_carryover = 0.0;  // arrived critical, survived to tau
  double became_critical = 0.0;     // turned critical along the way
  double noncritical = 0.0;         // still non-critical at tau
  double total() const {
    return critical_carryover + became_critical + noncritical;
  }
};

// Per-period loss bound of the sensitization-first rule at horizon tau,
// by direct summation.  tau must be >= 0.
SensParts loss_sens_parts(const BoundInputs& b, int tau);
double loss_sens_bound(const BoundInputs& b, int tau);

// Per-period loss bound of the criticality-first rule at horizon tau.
double loss_time_bound(const BoundInputs& b, int tau);

struct TradeoffBound {
  double numerator = 0.0;    // loss_sens_bound - loss_time_bound
  double denominator = 0.0;  // loss_sens_bound
  double ratio = 0.0;
};

// Throws std::domain_error when the denominator is zero.
TradeoffBound tradeoff_bound(const BoundInputs& b, int tau);

// One table row per horizon value; ratio is NaN where the denominator is 0.
struct BoundRow {
  int tau = 0;
  SensParts sens_parts;
  double sens_total = 0.0;
  double time_total = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

std::vector<BoundRow> bound_series(const BoundInputs& b, int tau_max);

// Side-by-side comparison with the published U.S. estimate at tau=10.
// within_tolerance uses a 1% relative threshold.
struct PublishedValue {
  const char* name;
  double computed = 0.0;
  double published = 0.0;
  double rel_diff = 0.0;
  bool within_tolerance = false;
};

inline constexpr double kPublishedNumerator = 0.010496;
inline constexpr double kPublishedDenominator = 0.114249;
inline constexpr double kPublishedRatio = 0.091872;

std::vector<PublishedValue> published_comparison(const BoundInputs& b,
                                                 int tau = 10);

}  // namespace kexsim
