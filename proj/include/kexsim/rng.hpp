#pragma once

#include <cmath>
#include <cstdint>

namespace kexsim {

// Deterministic randomness built on the SplitMix64 finalizer.
//
// Two access patterns share one generator:
//  * RngStream: a sequential stream, used where a variable number of draws is
//    consumed in a fixed documented order (arrival sampling).
//  * keyed draws: a pure function of (seed, tag, a, b), used where a draw must
//    be reproducible regardless of when or how often it is queried (crossmatch
//    outcomes, perishing, criticality onset).  Re-evaluating a keyed draw is
//    the caching semantics: the same key always yields the same uniform.
//
// Everything downstream (paired policy arms, replication sub-seeds, rerun
// byte-identity) relies on these two constructions only.

namespace rng_detail {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Feed one 64-bit word into a running hash state.
inline constexpr std::uint64_t absorb(std::uint64_t h, std::uint64_t v) {
  return mix(h ^ mix(v + kGamma));
}

// Map to [0, 1) using the top 53 bits (exactly representable in a double).
inline constexpr double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace rng_detail

// Purpose tags keep independent uses of the same seed from colliding.
enum class RngTag : std::uint64_t {
  Arrivals = 1,
  Crossmatch = 2,
  Perish = 3,
  Criticality = 4,
  Replication = 5,
};

// Uniform in [0, 1) as a pure function of the key.
inline double keyed_unit(std::uint64_t seed, RngTag tag, std::uint64_t a,
                         std::uint64_t b = 0) {
  using namespace rng_detail;
  std::uint64_t h = mix(seed + kGamma);
  h = absorb(h, static_cast<std::uint64_t>(tag));
  h = absorb(h, a);
  h = absorb(h, b);
  return to_unit(h);
}

// Derive a child seed; used for replication sub-seeds so that replication r is
// a pure function of (master seed, r) and adding replications never perturbs
// earlier ones.
inline std::uint64_t derive_seed(std::uint64_t seed, RngTag tag,
                                 std::uint64_t a, std::uint64_t b = 0) {
  using namespace rng_detail;
  std::uint64_t h = mix(seed + kGamma);
  h = absorb(h, static_cast<std::uint64_t>(tag));
  h = absorb(h, a);
  return absorb(h, b);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += rng_detail::kGamma;
    return rng_detail::mix(state_);
  }

  double next_unit() { return rng_detail::to_unit(next_u64()); }

  bool bernoulli(double p) { return next_unit() < p; }

  // Count of unit-rate exponential inter-arrivals fitting in `mean`.  Chosen
  // over std::poisson_distribution for bit-stable results across standard
  // library implementations; O(mean) draws is fine at the pool sizes used.
  int poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    int k = 0;
    double acc = 0.0;
    for (;;) {
      // next_unit() is in [0,1), so 1-u is in (0,1] and the log is finite.
      acc -= std::log1p(-next_unit());
      if (acc > mean) return k;
      ++k;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace kexsim
