/**
 * @file
 * @brief Height constraints and sea-level reset. All updates act on land height
 * and read phase-start state, so tile order never matters.
 */
#pragma once

#include <algorithm>
#include <vector>

#include "fluvial/parallel.hpp"
#include "fluvial/terrain.hpp"

namespace fluvial {

/// land <- lerp(land, constraint, value_strength)
inline void apply_value_constraint(TileGrid& grid, unsigned threads = 1) {
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    Tile& t = grid[i];
    const double v = t.value_strength;
    t.land_height += v * (t.constraint_height - t.land_height);
  });
}

/// Each in-bounds neighbor n proposes h_n + (c_t - c_n) for tile t; t moves toward
/// the mean proposal by its gradient strength. Computed on residuals r = h - c,
/// which is the same update but exact when r is constant.
inline void apply_gradient_constraint(TileGrid& grid, unsigned threads = 1) {
  std::vector<double> residual(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    residual[i] = grid[i].land_height - grid[i].constraint_height;
  const std::size_t w = grid.width();
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    Tile& t = grid[i];
    const double g = t.gradient_strength;
    if (g == 0.0) return;
    const std::uint8_t mask = grid.neighbor_mask(i / w, i % w);
    double sum = 0.0;
    int count = 0;
    for (Direction d : kDirections) {
      if ((mask >> static_cast<unsigned>(d)) & 1U) {
        sum += residual[grid.step(i, d)];
        ++count;
      }
    }
    if (count == 0) return;
    t.land_height += g * (sum / count - residual[i]);
  });
}

/// water <- max(0, sea_level - land)
inline void reset_sea_level(TileGrid& grid, unsigned threads = 1) {
  const double sea = grid.sea_level();
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    Tile& t = grid[i];
    t.water_height = std::max(0.0, sea - t.land_height);
  });
}

}  // namespace fluvial
