/**
 * @file
 * @brief Run configuration: flat `key = value` text, validated key by key, and
 * the translation from a configuration to simulation inputs.
 *
 * Keys are the long CLI flag names without the leading dashes. Lines starting
 * with `#` (after optional whitespace) and blank lines are ignored; a `#` after
 * a value starts a trailing comment.
 */
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "fluvial/baseline.hpp"
#include "fluvial/heightmap.hpp"
#include "fluvial/noise.hpp"
#include "fluvial/simulation.hpp"

namespace fluvial {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { Ours, Baseline };

struct ConfigKey {
  std::string_view name;
  std::string_view help;
};

inline constexpr std::array<ConfigKey, 30> kConfigKeys{{
    {"constraint", "constraint heightmap file (.pgm or float32)"},
    {"constraint-range", "world range LO,HI that PGM constraint samples map onto"},
    {"noise-octaves", "generate a fractal-noise constraint with this many octaves"},
    {"width", "width of a generated constraint map"},
    {"height", "height of a generated constraint map"},
    {"height-scale", "world height range of a generated constraint map"},
    {"moisture", "moisture map file"},
    {"moisture-uniform", "uniform moisture value"},
    {"gradient-strength", "gradient constraint strength map file"},
    {"gradient-strength-uniform", "uniform gradient constraint strength"},
    {"value-strength", "uniform value constraint strength, or 'remap'"},
    {"iterations", "number of simulation ticks"},
    {"seed", "random seed"},
    {"sea-level", "sea level in world units"},
    {"spacing", "tile edge length in world units"},
    {"threads", "worker threads for per-tile phases"},
    {"k-d", "tributary drainage decay"},
    {"k-e", "erosion constant"},
    {"n-exp", "drainage exponent"},
    {"m-exp", "slope exponent"},
    {"k-g", "gorge carving constant"},
    {"noise-amplitude", "constraint noise half-width (default 0.5% of range)"},
    {"algorithm", "ours | baseline"},
    {"baseline-k", "baseline erosion constant"},
    {"uplift-ticks", "baseline: ticks for uplift alone to reach the input relief"},
    {"out", "output land heightmap path"},
    {"out-range", "world range LO,HI for PGM output (default: data range)"},
    {"water-out", "output water depth map path"},
    {"snapshot-every", "write intermediate heightmaps every K ticks"},
    {"config", "key = value configuration file"},
}};

inline bool is_config_key(std::string_view key) {
  return std::any_of(kConfigKeys.begin(), kConfigKeys.end(),
                     [&](const ConfigKey& k) { return k.name == key; });
}

struct RunConfig {
  std::optional<std::filesystem::path> constraint;
  std::pair<double, double> constraint_range{0.0, 100.0};
  std::optional<unsigned> noise_octaves;
  std::size_t width = 256;
  std::size_t height = 256;
  double height_scale = 100.0;
  std::optional<std::filesystem::path> moisture;
  std::optional<double> moisture_uniform;
  std::optional<std::filesystem::path> gradient_strength;
  std::optional<double> gradient_strength_uniform;
  ValueStrengthField value_strength = 0.02;
  SimParams sim;
  Algorithm algorithm = Algorithm::Ours;
  double baseline_k = 0.5;
  double uplift_ticks = 100.0;
  std::optional<std::filesystem::path> out;
  std::optional<std::pair<double, double>> out_range;
  std::optional<std::filesystem::path> water_out;
  std::size_t snapshot_every = 0;

  /// Applies one key. Unknown keys and malformed values throw ConfigError.
  void set(std::string_view key, std::string_view value);

  /// Cross-key consistency checks (mutually exclusive sources, required inputs).
  void validate() const;

  /// Input files exist and output directories exist. Throws IoError.
  void validate_paths() const;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_real(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw ConfigError(std::string(key) + ": expected a real number, got '" + std::string(v) + "'");
  return out;
}

inline std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      std::string(v) + "'");
  return out;
}

inline std::pair<double, double> parse_range(std::string_view key, std::string_view v) {
  const auto comma = v.find(',');
  if (comma == std::string_view::npos)
    throw ConfigError(std::string(key) + ": expected LO,HI, got '" + std::string(v) + "'");
  const double lo = parse_real(key, trim(v.substr(0, comma)));
  const double hi = parse_real(key, trim(v.substr(comma + 1)));
  if (!(hi > lo)) throw ConfigError(std::string(key) + ": HI must exceed LO");
  return {lo, hi};
}

inline std::filesystem::path parse_path(std::string_view key, std::string_view v) {
  if (v.empty()) throw ConfigError(std::string(key) + ": empty path");
  return std::filesystem::path(std::string(v));
}

}  // namespace detail

inline void RunConfig::set(std::string_view key, std::string_view raw) {
  using namespace detail;
  const std::string_view v = trim(raw);
  if (key == "constraint") constraint = parse_path(key, v);
  else if (key == "constraint-range") constraint_range = parse_range(key, v);
  else if (key == "noise-octaves") {
    const auto o = parse_uint(key, v);
    if (o == 0 || o > 32) throw ConfigError("noise-octaves: must be in [1,32]");
    noise_octaves = static_cast<unsigned>(o);
  } else if (key == "width" || key == "height") {
    const auto n = parse_uint(key, v);
    if (n == 0 || n > 65536) throw ConfigError(std::string(key) + ": must be in [1,65536]");
    (key == "width" ? width : height) = n;
  } else if (key == "height-scale") {
    height_scale = parse_real(key, v);
    if (!(height_scale > 0.0)) throw ConfigError("height-scale: must be > 0");
  } else if (key == "moisture") moisture = parse_path(key, v);
  else if (key == "moisture-uniform") {
    moisture_uniform = parse_real(key, v);
    if (*moisture_uniform < 0.0) throw ConfigError("moisture-uniform: must be >= 0");
  } else if (key == "gradient-strength") gradient_strength = parse_path(key, v);
  else if (key == "gradient-strength-uniform") {
    gradient_strength_uniform = parse_real(key, v);
    if (*gradient_strength_uniform < 0.0 || *gradient_strength_uniform > 1.0)
      throw ConfigError("gradient-strength-uniform: must be in [0,1]");
  } else if (key == "value-strength") {
    if (v == "remap") {
      value_strength = RemapConstraint{};
    } else {
      const double s = parse_real(key, v);
      if (s < 0.0 || s > 1.0) throw ConfigError("value-strength: must be in [0,1] or 'remap'");
      value_strength = s;
    }
  } else if (key == "iterations") sim.iterations = parse_uint(key, v);
  else if (key == "seed") sim.seed = parse_uint(key, v);
  else if (key == "sea-level") sim.sea_level = parse_real(key, v);
  else if (key == "spacing") {
    sim.spacing = parse_real(key, v);
    if (!(sim.spacing > 0.0)) throw ConfigError("spacing: must be > 0");
  } else if (key == "threads") {
    const auto t = parse_uint(key, v);
    if (t == 0 || t > 1024) throw ConfigError("threads: must be in [1,1024]");
    sim.threads = static_cast<unsigned>(t);
  } else if (key == "k-d") {
    sim.k_d = parse_real(key, v);
    if (sim.k_d < 0.0 || sim.k_d > 1.0) throw ConfigError("k-d: must be in [0,1]");
  } else if (key == "k-e") {
    sim.k_e = parse_real(key, v);
    if (!(sim.k_e > 0.0)) throw ConfigError("k-e: must be > 0");
  } else if (key == "n-exp") sim.n_exp = parse_real(key, v);
  else if (key == "m-exp") sim.m_exp = parse_real(key, v);
  else if (key == "k-g") {
    sim.k_g = parse_real(key, v);
    if (!(sim.k_g > 0.0)) throw ConfigError("k-g: must be > 0");
  } else if (key == "noise-amplitude") {
    const double a = parse_real(key, v);
    if (a < 0.0) throw ConfigError("noise-amplitude: must be >= 0");
    sim.constraint_noise_amplitude = a;
  } else if (key == "algorithm") {
    if (v == "ours") algorithm = Algorithm::Ours;
    else if (v == "baseline") algorithm = Algorithm::Baseline;
    else throw ConfigError("algorithm: expected 'ours' or 'baseline', got '" + std::string(v) + "'");
  } else if (key == "baseline-k") {
    baseline_k = parse_real(key, v);
    if (!(baseline_k > 0.0)) throw ConfigError("baseline-k: must be > 0");
  } else if (key == "uplift-ticks") {
    uplift_ticks = parse_real(key, v);
    if (!(uplift_ticks > 0.0)) throw ConfigError("uplift-ticks: must be > 0");
  } else if (key == "out") out = parse_path(key, v);
  else if (key == "out-range") out_range = parse_range(key, v);
  else if (key == "water-out") water_out = parse_path(key, v);
  else if (key == "snapshot-every") snapshot_every = parse_uint(key, v);
  else if (key == "config") throw ConfigError("config: nested config files are not supported");
  else throw ConfigError("unknown key '" + std::string(key) + "'");
}

inline void RunConfig::validate() const {
  if (constraint && noise_octaves)
    throw ConfigError("constraint and noise-octaves are mutually exclusive");
  if (!constraint && !noise_octaves)
    throw ConfigError("one of constraint or noise-octaves is required");
  if (moisture && moisture_uniform)
    throw ConfigError("moisture and moisture-uniform are mutually exclusive");
  if (gradient_strength && gradient_strength_uniform)
    throw ConfigError("gradient-strength and gradient-strength-uniform are mutually exclusive");
  if (!out) throw ConfigError("out is required");
  if (algorithm == Algorithm::Baseline && water_out)
    throw ConfigError("water-out is not available for the baseline algorithm");
}

inline void RunConfig::validate_paths() const {
  for (const auto* in : {&constraint, &moisture, &gradient_strength})
    if (*in && !std::filesystem::is_regular_file(**in))
      throw IoError("input file not found: " + (*in)->string());
  for (const auto* o : {&out, &water_out}) {
    if (!*o) continue;
    const auto dir = (*o)->parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir))
      throw IoError("output directory does not exist: " + dir.string());
  }
}

/// Parses `key = value` text. Errors name the offending line.
inline RunConfig parse_run_config(std::string_view text, RunConfig base = {}) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    try {
      base.set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

inline RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {}) {
  const auto bytes = detail::read_file(path);
  return parse_run_config(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
                          std::move(base));
}

/// Loads or generates the constraint map in world units.
inline Heightmap load_constraint(const RunConfig& cfg) {
  if (cfg.constraint) {
    const auto [lo, hi] = cfg.constraint_range;
    return read_heightmap(*cfg.constraint, format_for_path(*cfg.constraint), lo, hi);
  }
  Heightmap map = fractal_noise(cfg.width, cfg.height, *cfg.noise_octaves, cfg.sim.seed);
  for (double& v : map.samples) v *= cfg.height_scale;
  map.range_min = 0.0;
  map.range_max = cfg.height_scale;
  return map;
}

inline InitSpec make_init_spec(const RunConfig& cfg, Heightmap constraint) {
  InitSpec spec;
  spec.constraint_map = std::move(constraint);
  if (cfg.moisture)
    spec.moisture = read_heightmap(*cfg.moisture, format_for_path(*cfg.moisture));
  else if (cfg.moisture_uniform)
    spec.moisture = *cfg.moisture_uniform;
  if (cfg.gradient_strength)
    spec.gradient_strength = read_heightmap(*cfg.gradient_strength, format_for_path(*cfg.gradient_strength));
  else if (cfg.gradient_strength_uniform)
    spec.gradient_strength = *cfg.gradient_strength_uniform;
  spec.value_strength = cfg.value_strength;
  return spec;
}

/// Baseline uplift per tick: the input relief above its minimum, spread over
/// `uplift_ticks` ticks.
inline Heightmap uplift_from_relief(const Heightmap& relief, double uplift_ticks) {
  Heightmap uplift = relief;
  const double lo = relief.min();
  for (double& v : uplift.samples) v = (v - lo) / uplift_ticks;
  uplift.fit_range();
  return uplift;
}

inline BaselineParams make_baseline_params(const RunConfig& cfg) {
  BaselineParams p;
  p.k = cfg.baseline_k;
  p.iterations = cfg.sim.iterations;
  p.seed = cfg.sim.seed;
  p.spacing = cfg.sim.spacing;
  p.threads = cfg.sim.threads;
  return p;
}

}  // namespace fluvial
