#pragma once

#include <cstdint>
#include <vector>

#include "kexsim/pair.hpp"
#include "kexsim/params.hpp"

namespace kexsim {

// Samples the pairs that join the pool at period `t`.
//
// Candidates are drawn i.i.d. (count ~ Poisson(n) or exactly round(n) under
// the fixed model) and pass through entry rejection sampling: a candidate
// whose donor is ABO-compatible with their own patient joins only if their
// own-tissue crossmatch fails (probability = their sensitization), since a
// compatible couple transplants directly and never registers.
//
// Ids are issued sequentially from *next_id to entrants only, so the id
// sequence is a pure function of (seed, t) and lines up across runs that
// share a seed regardless of matching policy.
//
// Per-candidate draw order (fixed; tests rely on it): blood types (patient,
// donor), sensitization level, criticality, then the own-tissue crossmatch
// uniform only when the candidate is self-ABO-compatible.
std::vector<PairRecord> generate_arrivals(const ModelParams& p, int t,
                                          std::uint64_t seed,
                                          PairId* next_id);

}  // namespace kexsim
