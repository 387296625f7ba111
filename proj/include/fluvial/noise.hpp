/**
 * @file
 * @brief Fractal Perlin noise for synthetic constraint and moisture maps.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "fluvial/heightmap.hpp"
#include "fluvial/random.hpp"
#include "fluvial/terrain.hpp"

namespace fluvial {

/// 2-D gradient noise with a seeded permutation table. Output is roughly in [-1, 1].
class PerlinNoise {
public:
  explicit PerlinNoise(std::uint64_t seed) {
    std::array<std::uint8_t, 256> p{};
    std::iota(p.begin(), p.end(), std::uint8_t{0});
    Random rng(seed);
    for (std::size_t i = p.size() - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
    for (std::size_t i = 0; i < 512; ++i) perm_[i] = p[i & 255];
  }

  double operator()(double x, double y) const noexcept {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const int xi = static_cast<int>(static_cast<std::int64_t>(fx) & 255);
    const int yi = static_cast<int>(static_cast<std::int64_t>(fy) & 255);
    const double dx = x - fx;
    const double dy = y - fy;
    const double u = fade(dx);
    const double v = fade(dy);
    const int aa = perm_[perm_[xi] + yi];
    const int ab = perm_[perm_[xi] + yi + 1];
    const int ba = perm_[perm_[xi + 1] + yi];
    const int bb = perm_[perm_[xi + 1] + yi + 1];
    const double x0 = lerp(grad(aa, dx, dy), grad(ba, dx - 1, dy), u);
    const double x1 = lerp(grad(ab, dx, dy - 1), grad(bb, dx - 1, dy - 1), u);
    return lerp(x0, x1, v);
  }

private:
  static double fade(double t) noexcept { return t * t * t * (t * (t * 6 - 15) + 10); }
  static double lerp(double a, double b, double t) noexcept { return a + t * (b - a); }
  static double grad(int hash, double x, double y) noexcept {
    switch (hash & 7) {
      case 0: return x + y;
      case 1: return -x + y;
      case 2: return x - y;
      case 3: return -x - y;
      case 4: return x;
      case 5: return -x;
      case 6: return y;
      default: return -y;
    }
  }

  std::array<std::uint8_t, 512> perm_{};
};

/// Sum of `octaves` Perlin layers, frequency doubling and amplitude halving per
/// octave, rescaled to [0, 1]. The first octave spans 4 lattice cells across the
/// larger map dimension.
inline Heightmap fractal_noise(std::size_t width, std::size_t height, unsigned octaves,
                               std::uint64_t seed) {
  if (width == 0 || height == 0) throw UsageError("fractal_noise: dimensions must be positive");
  if (octaves == 0) throw UsageError("fractal_noise: octaves must be >= 1");
  const PerlinNoise noise(seed);
  const double base = 4.0 / static_cast<double>(std::max(width, height));
  Heightmap map(width, height);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      double sum = 0.0;
      double amplitude = 1.0;
      double frequency = base;
      for (unsigned o = 0; o < octaves; ++o) {
        // Shift each octave so lattice points do not line up across octaves.
        const double shift = 17.31 * o;
        sum += amplitude * noise((c + 0.5) * frequency + shift, (r + 0.5) * frequency + shift);
        amplitude *= 0.5;
        frequency *= 2.0;
      }
      map(r, c) = sum;
    }
  }
  const double lo = map.min();
  const double span = map.max() - lo;
  for (double& v : map.samples) v = span > 0.0 ? (v - lo) / span : 0.0;
  map.range_min = 0.0;
  map.range_max = 1.0;
  return map;
}

}  // namespace fluvial
