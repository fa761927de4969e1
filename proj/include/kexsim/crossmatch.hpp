#pragma once

#include <cstdint>

#include "kexsim/pair.hpp"
#include "kexsim/rng.hpp"

namespace kexsim {

// Decides whether the donor of one pair can give to the patient of another.
//
// The tissue-type outcome for an ordered (donor pair, patient pair) couple is
// drawn once and reused forever: it is a keyed function of (seed, donor id,
// patient id), so querying it at different periods, in different order, or
// from differently-policied runs sharing the seed always agrees.
//
// In dense mode the tissue draw is skipped and ABO compatibility alone decides
// (entry rejection sampling elsewhere still uses the configured
// sensitizations; dense only removes edge-level noise).
class CrossmatchOracle {
 public:
  CrossmatchOracle(std::uint64_t seed, bool dense = false)
      : seed_(seed), dense_(dense) {}

  // Edge from `donor_side`'s donor to `patient_side`'s patient.
  bool edge_exists(const PairRecord& donor_side,
                   const PairRecord& patient_side) const {
    if (donor_side.id == patient_side.id) return false;
    if (!abo_compatible(patient_side.patient_blood, donor_side.donor_blood))
      return false;
    if (dense_) return true;
    double u = keyed_unit(seed_, RngTag::Crossmatch, donor_side.id,
                          patient_side.id);
    return u >= patient_side.sensitization;
  }

  bool dense() const { return dense_; }
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  bool dense_;
};

}  // namespace kexsim
