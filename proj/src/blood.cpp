#include "kexsim/blood.hpp"

namespace kexsim {

const char* to_string(BloodType t) {
  switch (t) {
    case BloodType::O: return "O";
    case BloodType::A: return "A";
    case BloodType::B: return "B";
    case BloodType::AB: return "AB";
  }
  return "?";
}

const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::Overdemanded: return "overdemanded";
    case PairClass::Underdemanded: return "underdemanded";
    case PairClass::SelfDemanded: return "selfdemanded";
    case PairClass::Reciprocal: return "reciprocal";
  }
  return "?";
}

std::optional<BloodType> blood_from_string(std::string_view s) {
  if (s == "O" || s == "o") return BloodType::O;
  if (s == "A" || s == "a") return BloodType::A;
  if (s == "B" || s == "b") return BloodType::B;
  if (s == "AB" || s == "ab" || s == "Ab" || s == "aB") return BloodType::AB;
  return std::nullopt;
}

}  // namespace kexsim
