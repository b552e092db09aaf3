#pragma once

#include <cmath>
#include <cstdint>

namespace dropzone {

/// SplitMix64 (Steele/Lea/Vigna). Chosen over std::mt19937 because every
/// draw below is fully specified here, so bundles generated from a seed can
/// be reproduced bit-exactly by an independent implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Plain modulo; bias is negligible for the small ranges used here.
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

  /// Box-Muller, consuming exactly two uniform draws per call (no caching,
  /// so the draw sequence stays easy to replicate).
  double gaussian() {
    double u1 = 1.0 - next_double();  // (0, 1], keeps log() finite
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

 private:
  uint64_t state_;
};

}  // namespace dropzone
