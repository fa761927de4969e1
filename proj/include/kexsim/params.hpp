#pragma once

#include <array>
#include <string>
#include <vector>

#include "kexsim/blood.hpp"

namespace kexsim {

// How many pairs arrive per period.
enum class ArrivalModel { Poisson, Fixed };

// Population and dynamics parameters for the exchange model.
struct ModelParams {
  double n = 50.0;  // expected arrivals per period

  // Blood-type frequencies, indexed by BloodType (O, A, B, AB).
  std::array<double, 4> mu_blood{0.44, 0.36, 0.10, 0.10};

  double mu_H = 0.3;      // P(high sensitization level)
  double mu_C = 0.14;     // P(critical on arrival)
  double gamma_H = 0.9;   // crossmatch-failure probability, high level
  double gamma_L = 0.2;   // crossmatch-failure probability, low level
  double sigma = 0.8;     // threshold defining the highly-sensitized flag
  double rho_C = 0.35;    // per-period perishing probability while critical
  double rho_NC = 0.25;   // per-period perishing probability while non-critical
  double eta_C = 0.09;    // per-period probability of becoming critical
  int k_max = 3;          // maximum exchange cycle length (2 or 3)

  ArrivalModel arrivals = ArrivalModel::Poisson;

  double mu(BloodType t) const {
    return mu_blood[static_cast<std::size_t>(t)];
  }

  // Population-average crossmatch failure probability.
  double gamma_bar() const { return mu_H * gamma_H + (1.0 - mu_H) * gamma_L; }

  // Crossmatch failure probability for a given sensitization level.
  double gamma(bool high_level) const { return high_level ? gamma_H : gamma_L; }

  // U.S. deceased-donor waitlist calibration (2017 OPTN-based figures).
  static ModelParams us_2017();
};

struct ParamCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  double gamma_bar = 0.0;
  std::vector<ParamCheck> checks;
  bool all_passed() const;
};

// Verifies the modelling assumptions (reported per check).  Structurally
// invalid inputs (probabilities outside [0,1], frequencies not summing to 1,
// n <= 0, cycle cap other than 2 or 3) throw std::invalid_argument instead.
ValidationReport validate_params(const ModelParams& p);

}  // namespace kexsim
