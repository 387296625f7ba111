/**
 * @file
 * @brief Wall-time comparison of the simulation against the uplift baseline
 * on a fractal-noise input.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "fluvial/baseline.hpp"
#include "fluvial/config.hpp"
#include "fluvial/noise.hpp"
#include "fluvial/simulation.hpp"

namespace fluvial {

struct BenchOptions {
  std::vector<std::size_t> sizes{256, 512, 1024};
  std::size_t repetitions = 10;
  std::size_t iterations = 100;
  unsigned octaves = 3;
  double height_scale = 100.0;
  double uplift_ticks = 100.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct BenchRow {
  std::string algorithm;
  std::size_t size = 0;
  std::size_t repetitions = 0;
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
};

inline BenchRow summarize(std::string algorithm, std::size_t size, const std::vector<double>& t) {
  BenchRow row{std::move(algorithm), size, t.size(), 0.0, 0.0};
  for (double x : t) row.mean_seconds += x;
  row.mean_seconds /= static_cast<double>(t.size());
  if (t.size() > 1) {
    double ss = 0.0;
    for (double x : t) ss += (x - row.mean_seconds) * (x - row.mean_seconds);
    row.stddev_seconds = std::sqrt(ss / static_cast<double>(t.size() - 1));
  }
  return row;
}

/// Seconds for one full run (initialization plus all ticks) of our algorithm.
inline double time_ours(const Heightmap& constraint, const BenchOptions& o) {
  InitSpec spec;
  spec.constraint_map = constraint;
  SimParams p;
  p.iterations = o.iterations;
  p.seed = o.seed;
  p.threads = o.threads;
  const auto start = std::chrono::steady_clock::now();
  const RunResult r = run(spec, p);
  const auto stop = std::chrono::steady_clock::now();
  static_cast<void>(r);
  return std::chrono::duration<double>(stop - start).count();
}

inline double time_baseline(const Heightmap& uplift, const BenchOptions& o) {
  BaselineParams p;
  p.iterations = o.iterations;
  p.seed = o.seed;
  p.threads = o.threads;
  const auto start = std::chrono::steady_clock::now();
  const BaselineResult r = baseline_simulate(uplift, p);
  const auto stop = std::chrono::steady_clock::now();
  static_cast<void>(r);
  return std::chrono::duration<double>(stop - start).count();
}

/// Rows in (size, algorithm) order, baseline first. Repetitions alternate the
/// two algorithms so slow drift in machine load affects both equally.
inline std::vector<BenchRow> run_benchmark(const BenchOptions& o) {
  std::vector<BenchRow> rows;
  for (std::size_t n : o.sizes) {
    Heightmap constraint = fractal_noise(n, n, o.octaves, o.seed);
    for (double& v : constraint.samples) v *= o.height_scale;
    const Heightmap uplift = uplift_from_relief(constraint, o.uplift_ticks);
    std::vector<double> ours, base;
    for (std::size_t k = 0; k < o.repetitions; ++k) {
      base.push_back(time_baseline(uplift, o));
      ours.push_back(time_ours(constraint, o));
    }
    rows.push_back(summarize("baseline", n, base));
    rows.push_back(summarize("ours", n, ours));
  }
  return rows;
}

}  // namespace fluvial
