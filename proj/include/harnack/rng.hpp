#pragma once

#include <harnack/errors.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace harnack {

// splitmix64 finalizer; used to derive independent per-sample streams so
// certificates do not depend on evaluation order.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Portable RNG: mt19937_64 output is fixed by the standard; the conversions
// below avoid the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix_seed(seed, stream)) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double angle() { return uniform(0.0, 2.0 * std::numbers::pi); }
  Complex unit() { return std::polar(1.0, angle()); }
  // Uniform (area measure) in the disk |z| < radius.
  Complex in_disk(double radius) { return std::polar(radius * std::sqrt(uniform()), angle()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace harnack
