#include "kexsim/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kexsim {

ModelParams ModelParams::us_2017() {
  ModelParams p;
  p.n = 50.0;
  p.mu_blood = {0.44, 0.36, 0.10, 0.10};  // O, A, B, AB
  p.mu_H = 0.3;
  p.mu_C = 0.14;
  p.gamma_H = 0.9;
  p.gamma_L = 0.2;
  p.sigma = 0.8;
  p.rho_C = 0.35;
  p.rho_NC = 0.25;
  p.eta_C = 0.09;
  p.k_max = 3;
  p.arrivals = ArrivalModel::Poisson;
  return p;
}

bool ValidationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

namespace {

void require_probability(const char* name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream msg;
    msg << name << " = " << v << " is not a probability in [0,1]";
    throw std::invalid_argument(msg.str());
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

ValidationReport validate_params(const ModelParams& p) {
  if (!(p.n > 0.0))
    throw std::invalid_argument("n must be positive, got " + fmt(p.n));
  for (auto t : kBloodTypes)
    require_probability("mu_blood", p.mu(t));
  double mu_sum = 0.0;
  for (auto t : kBloodTypes) mu_sum += p.mu(t);
  if (std::abs(mu_sum - 1.0) > 1e-9)
    throw std::invalid_argument("mu_blood must sum to 1, got " + fmt(mu_sum));
  require_probability("mu_H", p.mu_H);
  require_probability("mu_C", p.mu_C);
  require_probability("gamma_H", p.gamma_H);
  require_probability("gamma_L", p.gamma_L);
  require_probability("sigma", p.sigma);
  require_probability("rho_C", p.rho_C);
  require_probability("rho_NC", p.rho_NC);
  require_probability("eta_C", p.eta_C);
  if (p.k_max != 2 && p.k_max != 3)
    throw std::invalid_argument("k_max must be 2 or 3, got " + fmt(p.k_max));

  ValidationReport r;
  r.gamma_bar = p.gamma_bar();

  // Soft modelling-assumption checks: failures mean the closed-form bounds
  // are unsupported for these parameters, not that simulation is impossible.
  {
    ParamCheck c;
    c.name = "sensitization-window";  // mu_H < gamma_bar < 1/2
    c.passed = p.mu_H < r.gamma_bar && r.gamma_bar < 0.5;
    c.detail = "mu_H=" + fmt(p.mu_H) + " gamma_bar=" + fmt(r.gamma_bar) +
               " (needs mu_H < gamma_bar < 0.5)";
    r.checks.push_back(std::move(c));
  }
  {
    ParamCheck c;
    c.name = "type-O-margin";  // mu_O < 1.5 * mu_A
    c.passed = p.mu(BloodType::O) < 1.5 * p.mu(BloodType::A);
    c.detail = "mu_O=" + fmt(p.mu(BloodType::O)) + " mu_A=" +
               fmt(p.mu(BloodType::A)) + " (needs mu_O < 1.5*mu_A)";
    r.checks.push_back(std::move(c));
  }
  {
    ParamCheck c;
    c.name = "perish-rate-ordering";  // rho_C > rho_NC
    c.passed = p.rho_C > p.rho_NC;
    c.detail = "rho_C=" + fmt(p.rho_C) + " rho_NC=" + fmt(p.rho_NC) +
               " (critical pairs should perish faster)";
    r.checks.push_back(std::move(c));
  }
  {
    ParamCheck c;
    c.name = "sensitization-threshold";  // gamma_L < sigma <= gamma_H
    c.passed = p.gamma_L < p.sigma && p.sigma <= p.gamma_H;
    c.detail = "gamma_L=" + fmt(p.gamma_L) + " sigma=" + fmt(p.sigma) +
               " gamma_H=" + fmt(p.gamma_H) +
               " (flag derives from sensitization >= sigma)";
    r.checks.push_back(std::move(c));
  }
  return r;
}

}  // namespace kexsim
