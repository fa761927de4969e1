#include "kexsim/arrivals.hpp"

#include <cmath>

#include "kexsim/rng.hpp"

namespace kexsim {

namespace {

BloodType sample_blood(const ModelParams& p, RngStream& s) {
  double u = s.next_unit();
  double acc = 0.0;
  for (auto t : kBloodTypes) {
    acc += p.mu(t);
    if (u < acc) return t;
  }
  return BloodType::AB;  // guards against acc rounding just below 1
}

}  // namespace

std::vector<PairRecord> generate_arrivals(const ModelParams& p, int t,
                                          std::uint64_t seed,
                                          PairId* next_id) {
  RngStream s(derive_seed(seed, RngTag::Arrivals,
                          static_cast<std::uint64_t>(t)));
  int count = p.arrivals == ArrivalModel::Fixed
                  ? static_cast<int>(std::llround(p.n))
                  : s.poisson(p.n);

  std::vector<PairRecord> entrants;
  for (int i = 0; i < count; ++i) {
    PairRecord r;
    r.patient_blood = sample_blood(p, s);
    r.donor_blood = sample_blood(p, s);
    bool high_level = s.bernoulli(p.mu_H);
    r.critical = s.bernoulli(p.mu_C);
    r.sensitization = p.gamma(high_level);
    r.highly_sensitized = r.sensitization >= p.sigma;
    r.arrival_time = t;

    // A candidate whose own donor could give directly never registers unless
    // the in-house crossmatch fails.
    if (abo_compatible(r.patient_blood, r.donor_blood) &&
        !s.bernoulli(r.sensitization)) {
      continue;  // transplanted directly; consumes its draws but no id
    }
    r.id = (*next_id)++;
    entrants.push_back(r);
  }
  return entrants;
}

}  // namespace kexsim
