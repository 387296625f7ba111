// Command-line front end: `generate` runs one simulation, `bench` times both
// algorithms, `noise` writes a fractal-noise map.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O or file-format error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fluvial/baseline.hpp"
#include "fluvial/bench.hpp"
#include "fluvial/config.hpp"
#include "fluvial/heightmap.hpp"
#include "fluvial/noise.hpp"
#include "fluvial/simulation.hpp"

namespace fs = std::filesystem;
using namespace fluvial;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

void print_report_header() {
  std::printf("tick\tmean_abs_dh\tmax_abs_dh\tminima_count\tgorges_carved\tmillis\n");
}

void print_report(const TickReport& r) {
  std::printf("%zu\t%.9g\t%.9g\t%zu\t%zu\t%.3f\n", r.tick, r.mean_abs_dh, r.max_abs_dh,
              r.minima_count, r.gorges_carved, r.millis);
}

fs::path snapshot_path(const fs::path& out, std::size_t tick) {
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "_tick%05zu", tick);
  fs::path p = out;
  p.replace_filename(out.stem().string() + suffix + out.extension().string());
  return p;
}

void write_output(Heightmap map, const fs::path& path, const RunConfig& cfg) {
  if (cfg.out_range) {
    map.range_min = cfg.out_range->first;
    map.range_max = cfg.out_range->second;
  }
  write_heightmap(map, path, format_for_path(path));
}

int generate(const RunConfig& cfg) {
  Heightmap constraint = load_constraint(cfg);
  const std::size_t every = cfg.snapshot_every;
  print_report_header();
  if (cfg.algorithm == Algorithm::Ours) {
    const InitSpec spec = make_init_spec(cfg, std::move(constraint));
    const RunResult result = run(spec, cfg.sim, [&](const TileGrid& grid, const TickReport& r) {
      print_report(r);
      if (every > 0 && r.tick % every == 0)
        write_output(land_heightmap(grid), snapshot_path(*cfg.out, r.tick), cfg);
    });
    write_output(land_heightmap(result.grid), *cfg.out, cfg);
    if (cfg.water_out) write_output(water_heightmap(result.grid), *cfg.water_out, cfg);
  } else {
    const Heightmap uplift = uplift_from_relief(constraint, cfg.uplift_ticks);
    const BaselineResult result = baseline_simulate(
        uplift, make_baseline_params(cfg), [&](const BaselineGrid& grid, const TickReport& r) {
          print_report(r);
          if (every > 0 && r.tick % every == 0)
            write_output(baseline_heightmap(grid), snapshot_path(*cfg.out, r.tick), cfg);
        });
    write_output(result.heights, *cfg.out, cfg);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based fluvial erosion terrain generator"};
  app.require_subcommand(1);

  // generate: every config key is also a flag; flags override the config file.
  auto* gen = app.add_subcommand("generate", "Run a simulation and write heightmaps");
  std::map<std::string, std::string> flag_values;
  for (const ConfigKey& key : kConfigKeys) {
    const std::string name(key.name);
    gen->add_option("--" + name, flag_values[name], std::string(key.help));
  }

  auto* bench = app.add_subcommand("bench", "Time both algorithms over grid sizes");
  BenchOptions bopt;
  bench->add_option("--sizes", bopt.sizes, "grid edge lengths")->delimiter(',');
  bench->add_option("--repetitions", bopt.repetitions, "runs per (algorithm, size)")
      ->check(CLI::PositiveNumber);
  bench->add_option("--iterations", bopt.iterations, "ticks per run");
  bench->add_option("--octaves", bopt.octaves, "fractal noise octaves of the input")
      ->check(CLI::Range(1, 32));
  bench->add_option("--seed", bopt.seed, "random seed");
  bench->add_option("--threads", bopt.threads, "worker threads")->check(CLI::Range(1, 1024));

  auto* noise = app.add_subcommand("noise", "Write a fractal Perlin noise map in [0, scale]");
  std::size_t nw = 256, nh = 256;
  unsigned octaves = 3;
  std::uint64_t nseed = 0;
  double scale = 1.0;
  std::string nout;
  noise->add_option("--width", nw)->check(CLI::PositiveNumber);
  noise->add_option("--height", nh)->check(CLI::PositiveNumber);
  noise->add_option("--octaves", octaves)->check(CLI::Range(1, 32));
  noise->add_option("--seed", nseed);
  noise->add_option("--scale", scale)->check(CLI::PositiveNumber);
  noise->add_option("--out", nout)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (gen->parsed()) {
      RunConfig cfg;
      if (gen->count("--config") > 0) cfg = load_run_config(flag_values["config"]);
      for (const ConfigKey& key : kConfigKeys) {
        const std::string name(key.name);
        if (name != "config" && gen->count("--" + name) > 0) cfg.set(name, flag_values[name]);
      }
      cfg.validate();
      cfg.sim.validate();
      cfg.validate_paths();
      return generate(cfg);
    }
    if (bench->parsed()) {
      std::printf("algorithm\tsize\trepetitions\tmean_s\tstddev_s\n");
      for (const BenchRow& row : run_benchmark(bopt)) {
        std::printf("%s\t%zu\t%zu\t%.4f\t%.4f\n", row.algorithm.c_str(), row.size,
                    row.repetitions, row.mean_seconds, row.stddev_seconds);
        std::fflush(stdout);
      }
      return 0;
    }
    if (noise->parsed()) {
      Heightmap map = fractal_noise(nw, nh, octaves, nseed);
      for (double& v : map.samples) v *= scale;
      map.range_min = 0.0;
      map.range_max = scale;
      write_heightmap(map, nout, format_for_path(nout));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
