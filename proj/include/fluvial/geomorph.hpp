/**
 * @file
 * @brief Terrain-lowering processes: gorge carving between adjacent basins and
 * stream-power fluvial erosion.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "fluvial/hydrology.hpp"
#include "fluvial/parallel.hpp"
#include "fluvial/terrain.hpp"

namespace fluvial {

struct ErosionParams {
  double k_e = 0.5;    ///< erosion constant
  double n_exp = 1.0;  ///< drainage exponent
  double m_exp = 2.0;  ///< slope exponent
  double k_g = 0.1;    ///< gorge carving weight constant
};

/// Carving weight for a minimum with total drainage `drainage`: min(k_g*sqrt(D), 1).
/// Zero without drainage, non-decreasing, saturating at full strength.
inline double carve_weight(double drainage, double k_g) {
  if (!(drainage >= 0.0)) throw UsageError("carve_weight: drainage must be >= 0");
  return std::min(k_g * std::sqrt(drainage), 1.0);
}

/// Stream equation k_e * D^n * s^m, before capping.
inline double stream_erosion(double drainage, double slope, const ErosionParams& p) noexcept {
  if (p.n_exp == 1.0 && p.m_exp == 2.0) return p.k_e * drainage * slope * slope;
  return p.k_e * std::pow(drainage, p.n_exp) * std::pow(slope, p.m_exp);
}

struct GorgePath {
  std::vector<std::size_t> nodes;   ///< M ... L, O ... M'
  std::vector<double> arc_lengths;  ///< cumulative, arc_lengths[0] == 0
  std::size_t leaf_position = 0;    ///< index of L within nodes; O follows it
  double weight = 0.0;
};

/// Lowest-total-height leaf of the drainage tree rooted at `minimum`, excluding
/// the minimum itself. Ties go to the smaller row-major index.
inline std::optional<std::size_t> lowest_leaf(const DrainageState& s, const TileGrid& grid,
                                              std::size_t minimum) {
  std::optional<std::size_t> best;
  std::vector<std::size_t> stack{minimum};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    if (s.tributaries[i] == 0) {
      if (i == minimum) continue;
      const double h = total_height(grid[i]);
      if (!best || h < total_height(grid[*best]) ||
          (h == total_height(grid[*best]) && i < *best))
        best = i;
      continue;
    }
    for (Direction d : kDirections)
      if (s.is_tributary(i, d)) stack.push_back(grid.step(i, d));
  }
  return best;
}

namespace detail {

inline std::size_t descend_to_minimum(const DrainageState& s, const TileGrid& grid, std::size_t i,
                                      std::vector<std::size_t>* chain) {
  for (;;) {
    if (chain) chain->push_back(i);
    if (!s.has_target(i)) return i;
    i = s.target(grid, i);
  }
}

}  // namespace detail

/// Path from `minimum` up to its lowest leaf L, across to L's neighbor opposite
/// its drain direction, and down that neighbor's descent to an adjacent minimum.
/// Returns nullopt when no such path connects two distinct waterless basins.
inline std::optional<GorgePath> derive_gorge_path(const DrainageState& s, const TileGrid& grid,
                                                  std::size_t minimum, double k_g) {
  if (s.has_target(minimum) || grid[minimum].water_height > 0.0) return std::nullopt;
  const auto leaf = lowest_leaf(s, grid, minimum);
  if (!leaf) return std::nullopt;
  const auto across = grid.neighbor(*leaf, opposite(s.direction(*leaf)));
  if (!across) return std::nullopt;

  std::vector<std::size_t> down_from_leaf;
  detail::descend_to_minimum(s, grid, *leaf, &down_from_leaf);

  GorgePath path;
  path.nodes.assign(down_from_leaf.rbegin(), down_from_leaf.rend());
  path.leaf_position = path.nodes.size() - 1;
  const std::size_t other = detail::descend_to_minimum(s, grid, *across, &path.nodes);
  if (other == minimum || grid[other].water_height > 0.0) return std::nullopt;

  // Consecutive nodes are neighbors: up the first basin each node drains to its
  // predecessor, then L steps across to O, then each node drains to its successor.
  path.arc_lengths.resize(path.nodes.size());
  path.arc_lengths[0] = 0.0;
  for (std::size_t k = 1; k < path.nodes.size(); ++k) {
    const std::size_t a = path.nodes[k - 1];
    const std::size_t b = path.nodes[k];
    double step;
    if (k <= path.leaf_position) step = neighbor_distance(grid, b, s.direction(b));
    else if (k == path.leaf_position + 1) step = neighbor_distance(grid, a, opposite(s.direction(a)));
    else step = neighbor_distance(grid, a, s.direction(a));
    path.arc_lengths[k] = path.arc_lengths[k - 1] + step;
  }
  path.weight = carve_weight(s.total_drainage[minimum], k_g);
  return path;
}

/// Pulls interior path nodes down toward the line between the two minima and
/// weakens their gradient constraint by (1 - w). Never raises a node.
inline void carve_gorge(TileGrid& grid, const GorgePath& path) {
  const double w = path.weight;
  if (w <= 0.0 || path.nodes.size() < 3) return;
  const double h0 = total_height(grid[path.nodes.front()]);
  const double h1 = total_height(grid[path.nodes.back()]);
  const double length = path.arc_lengths.back();
  for (std::size_t k = 1; k + 1 < path.nodes.size(); ++k) {
    Tile& t = grid[path.nodes[k]];
    const double f = length > 0.0 ? path.arc_lengths[k] / length : 0.5;
    const double ideal = h0 + (h1 - h0) * f;
    if (t.land_height > ideal) t.land_height += w * (ideal - t.land_height);
    t.gradient_strength *= (1.0 - w);
  }
}

/// Carves every eligible minimum in row-major order, each carve seeing the
/// previous ones. Returns the number of gorges carved.
inline std::size_t carve_gorges(TileGrid& grid, const DrainageState& s, double k_g) {
  std::size_t carved = 0;
  for (std::size_t k = 0; k < s.minima.size(); ++k) {
    if (s.minima_has_water[k]) continue;
    auto path = derive_gorge_path(s, grid, s.minima[k], k_g);
    if (!path || path->weight <= 0.0) continue;
    carve_gorge(grid, *path);
    ++carved;
  }
  return carved;
}

/// Stream-power erosion of every waterless tile with a drain target, capped at
/// the height gap to that target. All tiles read the same phase-start snapshot.
inline void fluvial_erode(TileGrid& grid, const DrainageState& s, const ErosionParams& p,
                          unsigned threads = 1) {
  std::vector<double> snapshot(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) snapshot[i] = total_height(grid[i]);
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    Tile& t = grid[i];
    if (!s.has_target(i) || t.water_height > 0.0) return;
    const std::size_t to = s.target(grid, i);
    const double gap = snapshot[i] - snapshot[to];
    if (!(gap > 0.0)) return;
    const double drainage = s.total_drainage[i];
    if (!(drainage > 0.0)) return;
    const double dist = neighbor_distance(grid, i, s.direction(i));
    // Coincident nodes: infinite slope, so the cap applies.
    const double dh = dist > 0.0 ? stream_erosion(drainage, gap / dist, p) : gap;
    // Landing exactly on the target avoids an ulp of overshoot from h - (h - h_to).
    if (dh >= gap) t.land_height = snapshot[to];
    else t.land_height -= dh;
  });
}

}  // namespace fluvial
