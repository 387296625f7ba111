/**
 * @file
 * @brief Uplift/erosion graph baseline used for timing and convergence
 * comparisons.
 *
 * Each tick raises every pixel by its uplift, routes each pixel to its lowest
 * strictly-lower Von Neumann neighbor, sums drainage areas over the resulting
 * forest (no decay) and lowers every routed pixel by k * s * sqrt(A), with no
 * cap. The slope s is taken at the end of the tick (implicit update, receivers
 * before donors); an explicit update diverges once k * sqrt(A) / dist exceeds 2.
 * The neighborhood matches the main algorithm so that timings compare like
 * with like.
 */
#pragma once

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "fluvial/heightmap.hpp"
#include "fluvial/hydrology.hpp"
#include "fluvial/parallel.hpp"
#include "fluvial/random.hpp"
#include "fluvial/simulation.hpp"
#include "fluvial/terrain.hpp"

namespace fluvial {

struct BaselineTile {
  double offset_x = 0.5;
  double offset_y = 0.5;
  double height = 0.0;
  double uplift = 0.0;         ///< per tick, >= 0
  double drainage_area = 1.0;  ///< > 0
  double total_drainage_area = 0.0;
};

class BaselineGrid {
public:
  BaselineGrid(std::size_t width, std::size_t height, double spacing = 1.0)
      : shape_(width, height, spacing), tiles_(width * height),
        receiver_(width * height, kNoTarget), donors_(width * height, 0) {}

  std::size_t width() const noexcept { return shape_.width(); }
  std::size_t height() const noexcept { return shape_.height(); }
  std::size_t size() const noexcept { return tiles_.size(); }
  double spacing() const noexcept { return shape_.spacing(); }

  BaselineTile& operator[](std::size_t i) noexcept { return tiles_[i]; }
  const BaselineTile& operator[](std::size_t i) const noexcept { return tiles_[i]; }

  std::optional<std::size_t> neighbor(std::size_t i, Direction d) const noexcept {
    return shape_.neighbor(i, d);
  }
  std::size_t step(std::size_t i, Direction d) const noexcept { return shape_.step(i, d); }
  std::uint8_t neighbor_mask(std::size_t row, std::size_t col) const noexcept {
    return shape_.neighbor_mask(row, col);
  }

  double point_distance(std::size_t a, std::size_t b) const noexcept {
    const double s = shape_.spacing();
    const double ax = (static_cast<double>(a % width()) + tiles_[a].offset_x) * s;
    const double ay = (static_cast<double>(a / width()) + tiles_[a].offset_y) * s;
    const double bx = (static_cast<double>(b % width()) + tiles_[b].offset_x) * s;
    const double by = (static_cast<double>(b / width()) + tiles_[b].offset_y) * s;
    return std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by));
  }

  /// Distance from pixel `i` to its neighbor in direction `d` (which must exist).
  double neighbor_distance(std::size_t i, Direction d) const noexcept {
    const BaselineTile& a = tiles_[i];
    const BaselineTile& b = tiles_[step(i, d)];
    const double dx = (col_step(d) + (b.offset_x - a.offset_x)) * spacing();
    const double dy = (row_step(d) + (b.offset_y - a.offset_y)) * spacing();
    return std::sqrt(dx * dx + dy * dy);
  }

  /// Receiver direction of each pixel from the most recent tick, or kNoTarget.
  const std::vector<std::int8_t>& receivers() const noexcept { return receiver_; }

private:
  friend void baseline_tick(BaselineGrid&, double, unsigned);

  TileGrid shape_;  // geometry only
  std::vector<BaselineTile> tiles_;
  std::vector<std::int8_t> receiver_;
  std::vector<std::uint8_t> donors_;
};

namespace detail {

inline std::optional<Direction> lowest_neighbor(const BaselineGrid& grid, std::size_t i,
                                                std::uint8_t in_bounds) noexcept {
  std::optional<Direction> best;
  double lowest = grid[i].height;
  for (Direction d : kDirections) {
    if (!((in_bounds >> static_cast<unsigned>(d)) & 1U)) continue;
    const double h = grid[grid.step(i, d)].height;
    if (h < lowest) {
      lowest = h;
      best = d;
    }
  }
  return best;
}

}  // namespace detail

/// Lowest neighbor strictly below pixel `i`; ties resolve in N, E, S, W order.
inline std::optional<Direction> lowest_neighbor(const BaselineGrid& grid, std::size_t i) noexcept {
  return detail::lowest_neighbor(grid, i, grid.neighbor_mask(i / grid.width(), i % grid.width()));
}

/// Erosion rate k * s * sqrt(A).
inline double baseline_erosion(double slope, double area, double k) noexcept {
  return k * slope * std::sqrt(area);
}

inline void baseline_tick(BaselineGrid& grid, double k, unsigned threads = 1) {
  const std::size_t n = grid.size();
  const std::size_t w = grid.width();
  auto& tiles = grid.tiles_;
  auto& receiver = grid.receiver_;
  auto& donors = grid.donors_;

  parallel_for(n, threads, [&](std::size_t i) { tiles[i].height += tiles[i].uplift; });
  parallel_for(grid.height(), threads, [&](std::size_t r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      const auto d = detail::lowest_neighbor(grid, i, grid.neighbor_mask(r, c));
      receiver[i] = d ? static_cast<std::int8_t>(*d) : kNoTarget;
    }
  });
  parallel_for(grid.height(), threads, [&](std::size_t r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      const std::uint8_t in_bounds = grid.neighbor_mask(r, c);
      std::uint8_t mask = 0;
      for (Direction d : kDirections)
        if (((in_bounds >> static_cast<unsigned>(d)) & 1U) &&
            receiver[grid.step(i, d)] == static_cast<std::int8_t>(opposite(d)))
          mask |= static_cast<std::uint8_t>(1U << static_cast<unsigned>(d));
      donors[i] = mask;
    }
  });

  // Upstream area sums, walking each donor chain down from its leaf while the
  // next pixel has all its donors done. `order` ends up donors-before-receivers.
  std::vector<std::uint8_t> pending(n);
  for (std::size_t i = 0; i < n; ++i) pending[i] = static_cast<std::uint8_t>(std::popcount(donors[i]));
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    if (donors[leaf] != 0) continue;
    std::size_t i = leaf;
    for (;;) {
      double area = tiles[i].drainage_area;
      for (Direction d : kDirections)
        if ((donors[i] >> static_cast<unsigned>(d)) & 1U)
          area += tiles[grid.step(i, d)].total_drainage_area;
      tiles[i].total_drainage_area = area;
      order.push_back(i);
      if (receiver[i] == kNoTarget) break;
      const std::size_t r = grid.step(i, static_cast<Direction>(receiver[i]));
      if (--pending[r] != 0) break;
      i = r;
    }
  }

  // Receivers settle before their donors: walk that order backwards.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t i = *it;
    if (receiver[i] == kNoTarget) continue;
    const Direction d = static_cast<Direction>(receiver[i]);
    const std::size_t r = grid.step(i, d);
    const double dist = grid.neighbor_distance(i, d);
    if (dist == 0.0) {
      tiles[i].height = tiles[r].height;
      continue;
    }
    // Solves h' = h - k * sqrt(A) * (h' - h_r') / dist for h'.
    const double coeff = k * std::sqrt(tiles[i].total_drainage_area) / dist;
    tiles[i].height = (tiles[i].height + coeff * tiles[r].height) / (1.0 + coeff);
  }
}

struct BaselineParams {
  double k = 0.5;
  std::size_t iterations = 100;
  std::uint64_t seed = 0;
  double spacing = 1.0;
  unsigned threads = 1;
};

/// Pixel points jittered from `seed`, zero initial heights, unit drainage area
/// per pixel (scaled by spacing squared).
inline BaselineGrid make_baseline_grid(const Heightmap& uplift, const BaselineParams& p) {
  if (uplift.width == 0 || uplift.height == 0) throw UsageError("uplift map is empty");
  BaselineGrid grid(uplift.width, uplift.height, p.spacing);
  Random rng(p.seed);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i].offset_x = rng.uniform();
    grid[i].offset_y = rng.uniform();
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(uplift.samples[i] >= 0.0) || !std::isfinite(uplift.samples[i]))
      throw UsageError("uplift must be finite and >= 0 (pixel " + std::to_string(i) + ")");
    grid[i].uplift = uplift.samples[i];
    grid[i].drainage_area = p.spacing * p.spacing;
  }
  return grid;
}

inline Heightmap baseline_heightmap(const BaselineGrid& grid) {
  Heightmap map(grid.width(), grid.height());
  for (std::size_t i = 0; i < grid.size(); ++i) map.samples[i] = grid[i].height;
  map.fit_range();
  return map;
}

using BaselineObserver = std::function<void(const BaselineGrid&, const TickReport&)>;

struct BaselineResult {
  Heightmap heights;
  std::vector<TickReport> reports;
};

inline BaselineResult baseline_simulate(const Heightmap& uplift, const BaselineParams& p,
                                        const BaselineObserver& observer = {}) {
  BaselineGrid grid = make_baseline_grid(uplift, p);
  BaselineResult result;
  result.reports.reserve(p.iterations);
  std::vector<double> before(grid.size());
  for (std::size_t k = 1; k <= p.iterations; ++k) {
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < grid.size(); ++i) before[i] = grid[i].height;
    baseline_tick(grid, p.k, p.threads);
    TickReport report;
    report.tick = k;
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = std::abs(grid[i].height - before[i]);
      sum += d;
      report.max_abs_dh = std::max(report.max_abs_dh, d);
      if (grid.receivers()[i] == kNoTarget) ++report.minima_count;
    }
    report.mean_abs_dh = sum / static_cast<double>(grid.size());
    report.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (observer) observer(grid, report);
    result.reports.push_back(report);
  }
  result.heights = baseline_heightmap(grid);
  return result;
}

inline Heightmap baseline_run(const Heightmap& uplift, std::size_t iterations, std::uint64_t seed,
                              double k = 0.5) {
  BaselineParams p;
  p.k = k;
  p.iterations = iterations;
  p.seed = seed;
  return baseline_simulate(uplift, p).heights;
}

}  // namespace fluvial
