#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace kexsim {

// ABO blood types.  The enum value doubles as the antigen bitmask:
// bit 0 = A antigen, bit 1 = B antigen.
enum class BloodType : std::uint8_t { O = 0, A = 1, B = 2, AB = 3 };

inline constexpr std::array<BloodType, 4> kBloodTypes{
    BloodType::O, BloodType::A, BloodType::B, BloodType::AB};

// A donor is ABO-compatible with a patient iff the donor's antigens are a
// subset of the patient's.
inline constexpr bool abo_compatible(BloodType patient, BloodType donor) {
  auto p = static_cast<std::uint8_t>(patient);
  auto d = static_cast<std::uint8_t>(donor);
  return (d & ~p) == 0;
}

// Structural role of a patient-donor pair in the exchange pool, determined by
// the direction of ABO compatibility between its own patient and donor:
//   SelfDemanded:  same type            (can swap within their own class)
//   Overdemanded:  donor -> patient ok  (donor is in high demand pool-wide)
//   Underdemanded: patient <- donor ko, reverse ok (hard to match)
//   Reciprocal:    incompatible both ways (A-B and B-A; match each other)
enum class PairClass : std::uint8_t {
  Overdemanded,
  Underdemanded,
  SelfDemanded,
  Reciprocal,
};

inline constexpr PairClass classify_pair(BloodType patient, BloodType donor) {
  if (patient == donor) return PairClass::SelfDemanded;
  if (abo_compatible(patient, donor)) return PairClass::Overdemanded;
  if (abo_compatible(donor, patient)) return PairClass::Underdemanded;
  return PairClass::Reciprocal;
}

const char* to_string(BloodType t);
const char* to_string(PairClass c);
std::optional<BloodType> blood_from_string(std::string_view s);

}  // namespace kexsim
