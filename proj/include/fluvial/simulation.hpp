/**
 * @file
 * @brief Grid initialization and the six-phase simulation tick.
 *
 * One tick runs, in order: drainage forest, drainage accumulation, gorge
 * carving, fluvial erosion, value then gradient constraint, sea-level reset.
 * A run is a pure function of its InitSpec and SimParams; the thread count only
 * changes how per-tile phases are scheduled, never their results.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "fluvial/geomorph.hpp"
#include "fluvial/heightmap.hpp"
#include "fluvial/hydrology.hpp"
#include "fluvial/random.hpp"
#include "fluvial/regulation.hpp"
#include "fluvial/terrain.hpp"

namespace fluvial {

struct SimParams {
  double k_d = 0.68;  ///< tributary decay per tile
  double k_e = 0.5;
  double n_exp = 1.0;
  double m_exp = 2.0;
  double k_g = 0.1;
  double sea_level = 0.0;
  /// Half-width of the uniform noise added to the constraint map. Unset means
  /// 0.5% of the constraint map's height range.
  std::optional<double> constraint_noise_amplitude;
  std::size_t iterations = 100;
  std::uint64_t seed = 0;
  double spacing = 1.0;
  unsigned threads = 1;

  ErosionParams erosion() const { return {k_e, n_exp, m_exp, k_g}; }

  void validate() const {
    if (!(k_d >= 0.0 && k_d <= 1.0)) throw UsageError("k_d must be in [0,1]");
    if (!(k_e > 0.0)) throw UsageError("k_e must be > 0");
    if (!(k_g > 0.0)) throw UsageError("k_g must be > 0");
    if (!std::isfinite(n_exp) || !std::isfinite(m_exp)) throw UsageError("exponents must be finite");
    if (!std::isfinite(sea_level)) throw UsageError("sea level must be finite");
    if (constraint_noise_amplitude && !(*constraint_noise_amplitude >= 0.0))
      throw UsageError("constraint noise amplitude must be >= 0");
    if (!(spacing > 0.0)) throw UsageError("spacing must be > 0");
  }
};

/// Value strength taken from the constraint map rescaled to [0,1].
struct RemapConstraint {};

using ScalarField = std::variant<double, Heightmap>;
using ValueStrengthField = std::variant<double, RemapConstraint>;

struct InitSpec {
  Heightmap constraint_map;
  ScalarField moisture = 1.0;
  ScalarField gradient_strength = 0.8;
  ValueStrengthField value_strength = 0.02;
};

namespace detail {

inline void check_field(const ScalarField& f, const Heightmap& ref, const char* name) {
  if (const auto* m = std::get_if<Heightmap>(&f)) {
    if (m->width != ref.width || m->height != ref.height)
      throw UsageError(std::string(name) + " map is " + std::to_string(m->width) + "x" +
                       std::to_string(m->height) + ", constraint map is " +
                       std::to_string(ref.width) + "x" + std::to_string(ref.height));
  } else if (!std::isfinite(std::get<double>(f))) {
    throw UsageError(std::string(name) + " must be finite");
  }
}

inline double field_at(const ScalarField& f, std::size_t i) {
  if (const auto* m = std::get_if<Heightmap>(&f)) return m->samples[i];
  return std::get<double>(f);
}

}  // namespace detail

inline TileGrid initialize(const InitSpec& spec, const SimParams& params) {
  params.validate();
  const Heightmap& cmap = spec.constraint_map;
  if (cmap.width == 0 || cmap.height == 0 || cmap.samples.size() != cmap.width * cmap.height)
    throw UsageError("constraint map is empty or inconsistent");
  detail::check_field(spec.moisture, cmap, "moisture");
  detail::check_field(spec.gradient_strength, cmap, "gradient strength");
  if (const auto* v = std::get_if<double>(&spec.value_strength); v && !(*v >= 0.0 && *v <= 1.0))
    throw UsageError("value strength must be in [0,1]");

  const double lo = cmap.min();
  const double range = cmap.max() - lo;
  const double amplitude = params.constraint_noise_amplitude.value_or(0.005 * range);

  TileGrid grid(cmap.width, cmap.height, params.spacing, params.sea_level);
  Random rng(params.seed);
  for (Tile& t : grid.tiles()) {
    t.offset_x = rng.uniform();
    t.offset_y = rng.uniform();
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Tile& t = grid[i];
    const double noise = amplitude > 0.0 ? rng.uniform(-amplitude, amplitude) : 0.0;
    t.constraint_height = cmap.samples[i] + noise;
    t.land_height = t.constraint_height;
    t.moisture = detail::field_at(spec.moisture, i);
    t.gradient_strength = detail::field_at(spec.gradient_strength, i);
    if (std::holds_alternative<RemapConstraint>(spec.value_strength))
      t.value_strength = range > 0.0 ? (cmap.samples[i] - lo) / range : 0.0;
    else
      t.value_strength = std::get<double>(spec.value_strength);
    if (!(t.moisture >= 0.0)) throw UsageError("moisture must be >= 0 (tile " + std::to_string(i) + ")");
    if (!(t.gradient_strength >= 0.0 && t.gradient_strength <= 1.0))
      throw UsageError("gradient strength must be in [0,1] (tile " + std::to_string(i) + ")");
  }
  reset_sea_level(grid);
  return grid;
}

struct TickReport {
  std::size_t tick = 0;
  double mean_abs_dh = 0.0;
  double max_abs_dh = 0.0;
  std::size_t minima_count = 0;
  std::size_t gorges_carved = 0;
  double millis = 0.0;
};

inline TickReport tick(TileGrid& grid, const SimParams& params) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> before(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) before[i] = grid[i].land_height;

  DrainageState drainage = build_drainage_forest(grid, params.threads);
  accumulate_drainage(drainage, grid, params.k_d);
  TickReport report;
  report.minima_count = drainage.minima.size();
  report.gorges_carved = carve_gorges(grid, drainage, params.k_g);
  fluvial_erode(grid, drainage, params.erosion(), params.threads);
  apply_value_constraint(grid, params.threads);
  apply_gradient_constraint(grid, params.threads);
  reset_sea_level(grid, params.threads);

  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = std::abs(grid[i].land_height - before[i]);
    sum += d;
    report.max_abs_dh = std::max(report.max_abs_dh, d);
  }
  report.mean_abs_dh = sum / static_cast<double>(grid.size());
  report.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

using TickObserver = std::function<void(const TileGrid&, const TickReport&)>;

struct RunResult {
  TileGrid grid;
  std::vector<TickReport> reports;
};

inline RunResult run(const InitSpec& spec, const SimParams& params,
                     const TickObserver& observer = {}) {
  RunResult result{initialize(spec, params), {}};
  result.reports.reserve(params.iterations);
  for (std::size_t k = 1; k <= params.iterations; ++k) {
    TickReport report = tick(result.grid, params);
    report.tick = k;
    if (observer) observer(result.grid, report);
    result.reports.push_back(report);
  }
  return result;
}

inline Heightmap land_heightmap(const TileGrid& grid) {
  Heightmap map(grid.width(), grid.height());
  for (std::size_t i = 0; i < grid.size(); ++i) map.samples[i] = grid[i].land_height;
  map.fit_range();
  return map;
}

inline Heightmap water_heightmap(const TileGrid& grid) {
  Heightmap map(grid.width(), grid.height());
  for (std::size_t i = 0; i < grid.size(); ++i) map.samples[i] = grid[i].water_height;
  map.fit_range();
  return map;
}

}  // namespace fluvial
