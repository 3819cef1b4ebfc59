#pragma once

#include <cstdint>
#include <random>

namespace funk {

// Reproducible random numbers: std::mt19937_64 is fully specified by the
// standard, and the conversions below avoid the implementation-defined
// standard distributions, so a seed yields the same stream everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (one value per call).
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Derives an independent sub-seed for shard `index`.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace funk
