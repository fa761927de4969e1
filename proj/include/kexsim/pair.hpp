#pragma once

#include <cstdint>

#include "kexsim/blood.hpp"

namespace kexsim {

using PairId = std::uint32_t;

enum class PairStatus : std::uint8_t { Active, Matched, Perished };

// One incompatible patient-donor pair registered with the exchange.
struct PairRecord {
  PairId id = 0;
  BloodType patient_blood = BloodType::O;
  BloodType donor_blood = BloodType::O;
  double sensitization = 0.0;      // tissue-type crossmatch failure probability
  bool highly_sensitized = false;  // sensitization >= sigma at entry
  bool critical = false;           // will not survive the current period unmatched
  int arrival_time = 0;
  PairStatus status = PairStatus::Active;
  int exit_time = -1;  // period of match or perish; -1 while active

  PairClass blood_class() const {
    return classify_pair(patient_blood, donor_blood);
  }
};

}  // namespace kexsim
