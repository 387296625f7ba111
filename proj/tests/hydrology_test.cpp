#include <gtest/gtest.h>

#include "fluvial/hydrology.hpp"
#include "fluvial/regulation.hpp"
#include "test_support.hpp"

using namespace fluvial;
using fluvial::fixtures::grid_from_heights;
using fluvial::fixtures::random_grid;

TEST(DrainDirection, FlatGridHasNoTargets) {
  const TileGrid g = grid_from_heights(3, 3, std::vector<double>(9, 4.0));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_FALSE(drain_direction(g, i));
}

TEST(DrainDirection, SingleLowerNeighbor) {
  // Center 10, west 5, others 12.
  const TileGrid g = grid_from_heights(3, 3, {12, 12, 12, 5, 10, 12, 12, 12, 12});
  EXPECT_EQ(compute_drain_direction(g, {1, 1}), Direction::West);
}

TEST(DrainDirection, PrefersSteeperGradientOverLargerDrop) {
  // North is 2 lower at distance 1 (gradient 2); east is 3 lower at distance 2
  // (gradient 1.5).
  TileGrid g = grid_from_heights(3, 3, {12, 8, 12, 12, 10, 7, 12, 12, 12});
  g.at({1, 1}).offset_x = 0.0;
  g.at({1, 2}).offset_x = 1.0;
  g.at({0, 1}).offset_x = 0.0;
  ASSERT_DOUBLE_EQ(node_distance(g, Coord{1, 1}, Coord{0, 1}), 1.0);
  ASSERT_DOUBLE_EQ(node_distance(g, Coord{1, 1}, Coord{1, 2}), 2.0);
  EXPECT_EQ(compute_drain_direction(g, {1, 1}), Direction::North);
  EXPECT_EQ(fixtures::oracle_receiver(g, g.index({1, 1})), g.index({0, 1}));
}

TEST(DrainDirection, TiesResolveNorthEastSouthWest) {
  const TileGrid g = grid_from_heights(3, 3, {9, 5, 9, 5, 10, 5, 9, 5, 9});
  EXPECT_EQ(compute_drain_direction(g, {1, 1}), Direction::North);
  const TileGrid h = grid_from_heights(3, 3, {9, 9, 9, 5, 10, 5, 9, 5, 9});
  EXPECT_EQ(compute_drain_direction(h, {1, 1}), Direction::East);
}

TEST(DrainageForest, MonotoneRamp) {
  const TileGrid g = grid_from_heights(4, 1, {4, 3, 2, 1});
  const DrainageState s = build_drainage_forest(g);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(s.direction(i), Direction::East);
  ASSERT_EQ(s.minima.size(), 1u);
  EXPECT_EQ(s.minima[0], 3u);
  EXPECT_FALSE(s.minima_has_water[0]);
}

TEST(DrainageForest, SubmergedGridIsAllWaterMinima) {
  TileGrid g = random_grid(5, 5, 3, 1.0);
  g.set_sea_level(10.0);
  reset_sea_level(g);
  const DrainageState s = build_drainage_forest(g);
  EXPECT_EQ(s.minima.size(), g.size());
  for (auto w : s.minima_has_water) EXPECT_TRUE(w);
}

TEST(DrainageForest, MatchesOracleOnRandomGrids) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TileGrid g = random_grid(8, 8, seed);
    const DrainageState s = build_drainage_forest(g);
    std::vector<std::size_t> minima;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto want = fixtures::oracle_receiver(g, i);
      ASSERT_EQ(s.has_target(i), want.has_value()) << "seed " << seed << " tile " << i;
      if (want) EXPECT_EQ(s.target(g, i), *want);
      else minima.push_back(i);
    }
    EXPECT_EQ(s.minima, minima);
  }
}

TEST(DrainageForest, TributariesInvertTargets) {
  const TileGrid g = random_grid(9, 7, 11);
  const DrainageState s = build_drainage_forest(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (Direction d : kDirections) {
      const auto n = g.neighbor(i, d);
      const bool drains_here = n && s.has_target(*n) && s.target(g, *n) == i;
      EXPECT_EQ(s.is_tributary(i, d), drains_here);
    }
}

TEST(DrainageForest, Acyclic) {
  const TileGrid g = random_grid(16, 16, 5);
  const DrainageState s = build_drainage_forest(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t at = i, steps = 0;
    while (s.has_target(at) && steps <= g.size()) {
      EXPECT_LT(total_height(g[s.target(g, at)]), total_height(g[at]));
      at = s.target(g, at);
      ++steps;
    }
    EXPECT_LE(steps, g.size());
  }
}

TEST(Accumulation, LeafIsOwnMoisture) {
  TileGrid g = grid_from_heights(1, 1, {3});
  g[0].moisture = 2.5;
  DrainageState s = build_drainage_forest(g);
  accumulate_drainage(s, g, 0.68);
  EXPECT_EQ(s.total_drainage[0], 2.5);
}

TEST(Accumulation, DecaysAlongChain) {
  TileGrid g = grid_from_heights(3, 1, {3, 2, 1});
  for (Tile& t : g.tiles()) t.moisture = 1.0;
  DrainageState s = build_drainage_forest(g);
  accumulate_drainage(s, g, 0.68);
  EXPECT_DOUBLE_EQ(s.total_drainage[0], 1.0);
  EXPECT_DOUBLE_EQ(s.total_drainage[1], 1.68);
  EXPECT_DOUBLE_EQ(s.total_drainage[2], 1.0 + 0.68 * 1.68);
  EXPECT_NEAR(s.total_drainage[2], 2.1424, 1e-12);
}

TEST(Accumulation, ZeroMoistureGivesZero) {
  TileGrid g = random_grid(6, 6, 1, 10.0, 0.0);
  DrainageState s = build_drainage_forest(g);
  accumulate_drainage(s, g, 0.68);
  for (double d : s.total_drainage) EXPECT_EQ(d, 0.0);
}

TEST(Accumulation, MatchesFixedPointOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    TileGrid g = random_grid(32, 32, seed);
    Random rng(seed + 1000);
    for (Tile& t : g.tiles()) t.moisture = rng.uniform(0.0, 3.0);
    DrainageState s = build_drainage_forest(g);
    accumulate_drainage(s, g, 0.68);
    EXPECT_EQ(s.accumulation_visits, g.size());
    const auto want = fixtures::oracle_drainage(g, s, 0.68);
    for (std::size_t i = 0; i < g.size(); ++i)
      EXPECT_NEAR(s.total_drainage[i], want[i], 1e-9 * std::max(1.0, want[i]));
  }
}

TEST(Accumulation, UnitMoistureNoDecayCountsSubtree) {
  const TileGrid g = random_grid(7, 7, 9);
  DrainageState s = build_drainage_forest(g);
  accumulate_drainage(s, g, 1.0);
  for (std::size_t root = 0; root < g.size(); ++root) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::size_t at = i;
      while (at != root && s.has_target(at)) at = s.target(g, at);
      if (at == root) ++count;
    }
    EXPECT_EQ(s.total_drainage[root], static_cast<double>(count));
  }
}

TEST(Accumulation, DominatesMoistureAndIsMonotone) {
  TileGrid g = random_grid(12, 12, 21);
  Random rng(77);
  for (Tile& t : g.tiles()) t.moisture = rng.uniform(0.0, 2.0);
  DrainageState s = build_drainage_forest(g);
  accumulate_drainage(s, g, 0.68);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(s.total_drainage[i], g[i].moisture);

  for (int trial = 0; trial < 20; ++trial) {
    TileGrid wetter = g;
    wetter[rng.below(g.size())].moisture += rng.uniform(0.0, 5.0);
    DrainageState s2 = build_drainage_forest(wetter);
    accumulate_drainage(s2, wetter, 0.68);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(s2.total_drainage[i], s.total_drainage[i]);
  }
}

TEST(DrainageForest, ThreadCountDoesNotChangeResult) {
  const TileGrid g = random_grid(33, 17, 4);
  const DrainageState a = build_drainage_forest(g, 1);
  const DrainageState b = build_drainage_forest(g, 4);
  EXPECT_EQ(a.drain_target, b.drain_target);
  EXPECT_EQ(a.tributaries, b.tributaries);
  EXPECT_EQ(a.minima, b.minima);
}
