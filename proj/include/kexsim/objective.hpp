#pragma once

#include <functional>
#include <string>

#include "kexsim/pair.hpp"

namespace kexsim {

// What the exact solver maximizes over vertex-disjoint cycle packings.
//
// The three lexicographic objectives compare the matched set by a chain of
// counts; ties remaining after the full chain are broken deterministically by
// the solver's canonical search order:
//   MaxCardinality: (total, sensitized, critical)
//   Sens:           (sensitized, total, critical)
//   Time:           (critical, total, sensitized)
//   CriticalThenSens (internal to the batching pipeline):
//                   (critical, sensitized, total)
// Weighted maximizes a plain sum of caller-supplied non-negative per-vertex
// weights with no secondary chain.
struct Objective {
  enum class Kind { MaxCardinality, Sens, Time, CriticalThenSens, Weighted };

  Kind kind = Kind::MaxCardinality;
  std::function<double(const PairRecord&)> weight;  // Weighted only

  static Objective max_cardinality() { return {Kind::MaxCardinality, {}}; }
  static Objective sens() { return {Kind::Sens, {}}; }
  static Objective time() { return {Kind::Time, {}}; }
  static Objective critical_then_sens() { return {Kind::CriticalThenSens, {}}; }
  static Objective weighted(std::function<double(const PairRecord&)> w) {
    return {Kind::Weighted, std::move(w)};
  }

  const char* name() const;
};

}  // namespace kexsim
