/**
 * @file
 * @brief Steepest-descent drainage forest and decayed drainage accumulation.
 *
 * Every tile drains to at most one Von Neumann neighbor of strictly lower total
 * height, so the drain relation is a forest rooted at local minima. Total
 * drainage is accumulated leaf-inward over that forest with one visit per tile.
 */
#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "fluvial/parallel.hpp"
#include "fluvial/terrain.hpp"

namespace fluvial {

inline constexpr std::int8_t kNoTarget = -1;

struct DrainageState {
  std::vector<std::int8_t> drain_target;    ///< Direction value, or kNoTarget
  std::vector<std::uint8_t> tributaries;    ///< bit d set: neighbor in direction d drains here
  std::vector<double> total_drainage;
  std::vector<std::size_t> minima;          ///< row-major
  std::vector<std::uint8_t> minima_has_water;
  std::size_t accumulation_visits = 0;

  bool has_target(std::size_t i) const noexcept { return drain_target[i] != kNoTarget; }
  Direction direction(std::size_t i) const noexcept {
    return static_cast<Direction>(drain_target[i]);
  }
  /// Index of the tile that `i` drains to. Requires has_target(i).
  std::size_t target(const TileGrid& grid, std::size_t i) const noexcept {
    return grid.step(i, direction(i));
  }
  bool is_tributary(std::size_t i, Direction from) const noexcept {
    return (tributaries[i] >> static_cast<unsigned>(from)) & 1U;
  }
};

namespace detail {

inline std::optional<Direction> steepest_descent(const TileGrid& grid, std::size_t i,
                                                 std::uint8_t in_bounds) noexcept {
  const Tile& here = grid[i];
  const double h = total_height(here);
  std::optional<Direction> best;
  double best_gradient = 0.0;
  for (Direction d : kDirections) {
    if (!((in_bounds >> static_cast<unsigned>(d)) & 1U)) continue;
    const std::size_t n = grid.step(i, d);
    const double drop = h - total_height(grid[n]);
    if (!(drop > 0.0)) continue;
    const double dist = neighbor_distance(grid, i, d);
    const double g = dist > 0.0 ? drop / dist : INFINITY;
    if (!best || g > best_gradient) {
      best = d;
      best_gradient = g;
    }
  }
  return best;
}

}  // namespace detail

/// Steepest strictly-lower neighbor of tile `i`; ties resolve in N, E, S, W order.
inline std::optional<Direction> drain_direction(const TileGrid& grid, std::size_t i) noexcept {
  return detail::steepest_descent(grid, i, grid.neighbor_mask(i / grid.width(), i % grid.width()));
}

inline std::optional<Direction> compute_drain_direction(const TileGrid& grid, Coord c) {
  grid.check(c);
  return drain_direction(grid, grid.index(c));
}

inline DrainageState build_drainage_forest(const TileGrid& grid, unsigned threads = 1) {
  const std::size_t n = grid.size();
  DrainageState s;
  s.drain_target.assign(n, kNoTarget);
  s.tributaries.assign(n, 0);
  s.total_drainage.assign(n, 0.0);

  const std::size_t w = grid.width();
  parallel_for(grid.height(), threads, [&](std::size_t r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      if (auto d = detail::steepest_descent(grid, i, grid.neighbor_mask(r, c)))
        s.drain_target[i] = static_cast<std::int8_t>(*d);
    }
  });
  // Pull formulation: tile i only writes its own tributary mask.
  parallel_for(grid.height(), threads, [&](std::size_t r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      const std::uint8_t in_bounds = grid.neighbor_mask(r, c);
      std::uint8_t mask = 0;
      for (Direction d : kDirections) {
        if (((in_bounds >> static_cast<unsigned>(d)) & 1U) &&
            s.drain_target[grid.step(i, d)] == static_cast<std::int8_t>(opposite(d)))
          mask |= static_cast<std::uint8_t>(1U << static_cast<unsigned>(d));
      }
      s.tributaries[i] = mask;
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (s.drain_target[i] != kNoTarget) continue;
    s.minima.push_back(i);
    s.minima_has_water.push_back(grid[i].water_height > 0.0 ? 1 : 0);
  }
  return s;
}

/// D(t) = moisture(t) + k_d * sum of D over tributaries of t.
///
/// Each leaf starts a walk down its drain chain that continues while the next
/// tile has all its tributaries done, so every tile is visited once, after its
/// tributaries, without recursion or a queue. Tributary sums are taken in
/// N, E, S, W order, which makes the result independent of visit order.
inline void accumulate_drainage(DrainageState& s, const TileGrid& grid, double k_d) {
  const std::size_t n = grid.size();
  std::vector<std::uint8_t> pending(n);
  for (std::size_t i = 0; i < n; ++i)
    pending[i] = static_cast<std::uint8_t>(std::popcount(s.tributaries[i]));
  s.accumulation_visits = 0;
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    if (s.tributaries[leaf] != 0) continue;
    std::size_t i = leaf;
    for (;;) {
      double inflow = 0.0;
      const std::uint8_t trib = s.tributaries[i];
      if (trib != 0)
        for (Direction d : kDirections)
          if ((trib >> static_cast<unsigned>(d)) & 1U) inflow += s.total_drainage[grid.step(i, d)];
      s.total_drainage[i] = grid[i].moisture + k_d * inflow;
      ++s.accumulation_visits;
      if (!s.has_target(i)) break;
      const std::size_t t = s.target(grid, i);
      if (--pending[t] != 0) break;
      i = t;
    }
  }
}

}  // namespace fluvial
