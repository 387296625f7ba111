#pragma once

#include <cstdint>
#include <random>

namespace fluvial {

/// Seeded uniform source. The engine is std::mt19937_64, whose output sequence
/// is fixed by the standard; conversions to reals are done here so results do
/// not depend on the standard library's distribution implementations.
class Random {
public:
  explicit Random(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace fluvial
