#pragma once

#include <cstdint>

namespace pilotwave {

/// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: every draw is a pure function of (seed, stream,
/// counter), so ensembles can be generated and evolved by any number of
/// workers without changing results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : base_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next_u64() { return mix64(base_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace pilotwave
