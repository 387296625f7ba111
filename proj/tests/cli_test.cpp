#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fluvial/config.hpp"
#include "fluvial/heightmap.hpp"
#include "fluvial/simulation.hpp"

using namespace fluvial;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fluvial_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) const {
    const fs::path stdout_path = dir_ / "stdout.txt";
    const std::string cmd = std::string(FLUVIAL_CLI) + " " + args + " > " + stdout_path.string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int raw = std::system(cmd.c_str());
    Outcome o;
    o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(stdout_path);
    std::stringstream ss;
    ss << in.rdbuf();
    o.out = ss.str();
    return o;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("generate --no-such-flag 3").status, 1);
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("generate --noise-octaves 2 --width 8 --height 8").status, 1);
  EXPECT_EQ(run("generate --noise-octaves 2 --k-d 7 --out " + path("a.hgt")).status, 1);
}

TEST_F(Cli, MissingInputExitsTwo) {
  EXPECT_EQ(run("generate --constraint " + path("missing.pgm") + " --out " + path("o.hgt")).status,
            2);
  {
    std::ofstream bad(path("bad.pgm"), std::ios::binary);
    bad << "P5\n4 4\n65535\n";
  }
  EXPECT_EQ(run("generate --constraint " + path("bad.pgm") + " --out " + path("o.hgt")).status, 2);
}

TEST_F(Cli, ZeroIterationsWritesNoisedConstraint) {
  const Outcome o = run("generate --noise-octaves 3 --width 24 --height 20 --seed 5 "
                        "--iterations 0 --out " + path("o.hgt"));
  ASSERT_EQ(o.status, 0);
  EXPECT_EQ(count_lines(o.out), 1U);

  RunConfig cfg = parse_run_config("noise-octaves = 3\nwidth = 24\nheight = 20\nseed = 5\n");
  const TileGrid g = initialize(make_init_spec(cfg, load_constraint(cfg)), cfg.sim);
  const Heightmap written = read_heightmap(path("o.hgt"), HeightmapFormat::Float32);
  ASSERT_EQ(written.samples.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    EXPECT_EQ(written.samples[i], static_cast<double>(static_cast<float>(g[i].constraint_height)));
}

TEST_F(Cli, ConfigFileSnapshotsAndWater) {
  {
    std::ofstream cfg(path("run.cfg"));
    cfg << "noise-octaves = 2\nwidth = 16\nheight = 16\niterations = 4\nsea-level = 30\n"
        << "snapshot-every = 2\nout = " << path("land.pgm") << "\n";
  }
  const Outcome o = run("generate --config " + path("run.cfg") + " --out-range 0,100 --water-out " +
                        path("water.hgt"));
  ASSERT_EQ(o.status, 0);
  EXPECT_EQ(count_lines(o.out), 5U);
  EXPECT_EQ(o.out.rfind("tick\t", 0), 0U);
  EXPECT_TRUE(fs::exists(path("land.pgm")));
  EXPECT_TRUE(fs::exists(path("land_tick00002.pgm")));
  EXPECT_TRUE(fs::exists(path("land_tick00004.pgm")));
  EXPECT_FALSE(fs::exists(path("land_tick00003.pgm")));
  const Heightmap water = read_heightmap(path("water.hgt"), HeightmapFormat::Float32);
  EXPECT_GT(water.max(), 0.0);
}

TEST_F(Cli, BaselineAndNoise) {
  EXPECT_EQ(run("noise --width 16 --height 16 --octaves 2 --scale 50 --out " + path("n.pgm")).status,
            0);
  const Outcome o = run("generate --constraint " + path("n.pgm") +
                        " --algorithm baseline --iterations 3 --out " + path("b.hgt"));
  ASSERT_EQ(o.status, 0);
  EXPECT_EQ(count_lines(o.out), 4U);
  EXPECT_TRUE(fs::exists(path("b.hgt")));
}

TEST_F(Cli, BenchSmoke) {
  const Outcome o = run("bench --sizes 16,24 --repetitions 2 --iterations 3");
  ASSERT_EQ(o.status, 0);
  EXPECT_EQ(count_lines(o.out), 5U);
  EXPECT_NE(o.out.find("baseline\t16\t2\t"), std::string::npos);
  EXPECT_NE(o.out.find("ours\t24\t2\t"), std::string::npos);
}
