#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kexsim/pair.hpp"

namespace kexsim {

// The set of pairs currently waiting, plus everyone who already left.
// Active pairs stay sorted by id (ids are issued in arrival order, so this is
// also arrival order) and every mutation keeps the accounting identity
//   active + matched + perished == total arrivals.
struct PoolState {
  int t = 0;  // current period
  std::vector<PairRecord> active;   // sorted by id
  std::vector<PairRecord> history;  // matched or perished, in exit order
  std::uint64_t total_arrivals = 0;
  std::uint64_t total_matched = 0;
  std::uint64_t total_perished = 0;

  const PairRecord* find_active(PairId id) const;
  PairRecord* find_active(PairId id);
  bool is_active(PairId id) const { return find_active(id) != nullptr; }

  // Appends newly arrived pairs (ids must exceed all existing ones).
  void add_arrivals(std::vector<PairRecord> arrivals);

  // Moves the given active pairs into history as Matched at period `when`.
  void mark_matched(std::span<const PairId> ids, int when);

  // Moves one active pair into history as Perished at period `when`.
  void mark_perished(PairId id, int when);

  bool conserved() const {
    return active.size() + total_matched + total_perished == total_arrivals;
  }
};

}  // namespace kexsim
