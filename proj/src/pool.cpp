#include "kexsim/pool.hpp"

#include <algorithm>
#include <stdexcept>

namespace kexsim {

namespace {

// Active pairs are sorted by id, so membership is a binary search.
std::vector<PairRecord>::const_iterator lower_bound_id(
    const std::vector<PairRecord>& v, PairId id) {
  return std::lower_bound(
      v.begin(), v.end(), id,
      [](const PairRecord& r, PairId key) { return r.id < key; });
}

}  // namespace

const PairRecord* PoolState::find_active(PairId id) const {
  auto it = lower_bound_id(active, id);
  if (it == active.end() || it->id != id) return nullptr;
  return &*it;
}

PairRecord* PoolState::find_active(PairId id) {
  return const_cast<PairRecord*>(
      static_cast<const PoolState*>(this)->find_active(id));
}

void PoolState::add_arrivals(std::vector<PairRecord> arrivals) {
  for (auto& r : arrivals) {
    if (!active.empty() && r.id <= active.back().id)
      throw std::invalid_argument("arrival ids must be fresh and increasing");
    if (r.status != PairStatus::Active)
      throw std::invalid_argument("arrivals must be Active");
    active.push_back(std::move(r));
    ++total_arrivals;
  }
}

void PoolState::mark_matched(std::span<const PairId> ids, int when) {
  for (PairId id : ids) {
    auto it = lower_bound_id(active, id);
    if (it == active.end() || it->id != id)
      throw std::invalid_argument("mark_matched: pair not active");
    PairRecord r = *it;
    active.erase(it);
    r.status = PairStatus::Matched;
    r.exit_time = when;
    history.push_back(std::move(r));
    ++total_matched;
  }
}

void PoolState::mark_perished(PairId id, int when) {
  auto it = lower_bound_id(active, id);
  if (it == active.end() || it->id != id)
    throw std::invalid_argument("mark_perished: pair not active");
  PairRecord r = *it;
  active.erase(it);
  r.status = PairStatus::Perished;
  r.exit_time = when;
  history.push_back(std::move(r));
  ++total_perished;
}

}  // namespace kexsim
