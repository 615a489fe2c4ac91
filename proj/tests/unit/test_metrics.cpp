#include <gtest/gtest.h>

#include "davnav/geodesic.hpp"
#include "davnav/metrics.hpp"
#include "oracles.hpp"

using namespace davnav;
namespace dt = davnav::testing;

TEST(Intercept, ConstantTrajectoryIsTheStaticGoal) {
  const GridMap m = dt::random_map(3, 12, 12, 0.2, 0.5);
  const auto& cells = m.free_cells();
  const Pose start{cells.front(), Heading::East};
  for (std::size_t i = 1; i < cells.size(); i += 5) {
    const auto d = action_distance(m, start, cells[i]);
    const std::vector<Cell> traj(60, cells[i]);
    const auto r = intercept_oracle(m, start, traj);
    if (!d || *d >= 60) {
      EXPECT_FALSE(r.feasible);
      continue;
    }
    ASSERT_TRUE(r.feasible);
    EXPECT_EQ(r.t_star, *d);
    EXPECT_EQ(r.catch_cell, cells[i]);
    EXPECT_EQ(r.g_actions, *d);
    EXPECT_DOUBLE_EQ(r.g_meters, *geodesic_field(m, start.cell).meters(cells[i]));
  }
}

TEST(Intercept, TargetMarchingDownACorridor) {
  const GridMap m = dt::map_from_rows({"#############", "#...........#", "#############"}, 0.5);
  // Cells 0..10 are columns 1..11; the target starts at 10 and walks west.
  std::vector<Cell> traj;
  for (int t = 0; t <= 10; ++t) traj.push_back({1, 11 - t});
  const auto r = intercept_oracle(m, {{1, 1}, Heading::East}, traj);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.t_star, 5);
  EXPECT_EQ(r.catch_cell, (Cell{1, 6}));
  EXPECT_DOUBLE_EQ(r.g_meters, 2.5);
  EXPECT_EQ(r.g_actions, 5);
  const auto b = dt::brute_force_intercept(m, {1, 1}, static_cast<int>(Heading::East), traj);
  EXPECT_EQ(b.t, 5);
}

TEST(Intercept, SealedTargetIsInfeasible) {
  const GridMap m = dt::map_from_rows({"#######", "#..#..#", "#######"});
  const std::vector<Cell> traj{{1, 4}, {1, 5}, {1, 4}, {1, 5}};
  EXPECT_FALSE(intercept_oracle(m, {{1, 1}, Heading::East}, traj).feasible);
}

TEST(Intercept, Errors) {
  const GridMap m = dt::open_room(3, 3);
  EXPECT_THROW(intercept_oracle(m, {{1, 1}, Heading::North}, std::vector<Cell>{}), Error);
  EXPECT_THROW(intercept_oracle(m, {{1, 1}, Heading::North}, std::vector<Cell>{{0, 0}}), Error);
}

TEST(Intercept, MatchesBruteForce) {
  Rng rng(2);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const GridMap m = dt::random_map(7000 + seed, 16, 16, 0.25);
    const auto& cells = m.free_cells();
    for (int trial = 0; trial < 4; ++trial) {
      const Cell s = cells[rng.index(cells.size())];
      const int h = static_cast<int>(rng.index(4));
      const auto traj = dt::random_walk(m, cells[rng.index(cells.size())],
                                        static_cast<int>(rng.index(60)), 0.4, rng);
      const auto got = intercept_oracle(m, {s, static_cast<Heading>(h)}, traj);
      const auto want = dt::brute_force_intercept(m, s, h, traj);
      ASSERT_EQ(got.feasible, want.feasible);
      if (!want.feasible) continue;
      EXPECT_EQ(got.t_star, want.t);
      EXPECT_EQ(got.catch_cell, want.cell);
      EXPECT_EQ(got.g_meters, want.g_meters);
      EXPECT_EQ(got.g_actions, want.g_actions);
    }
  }
}

TEST(Intercept, ClosestExtensionNeverFartherThanEarliest) {
  Rng rng(3);
  const GridMap m = dt::random_map(8, 16, 16, 0.2);
  const auto& cells = m.free_cells();
  for (int trial = 0; trial < 50; ++trial) {
    const auto traj = dt::random_walk(m, cells[rng.index(cells.size())], 60, 0.3, rng);
    const auto r = intercept_oracle(m, {cells[rng.index(cells.size())], Heading::North}, traj);
    if (!r.feasible) continue;
    EXPECT_LE(r.closest_g_meters, r.g_meters);
    EXPECT_GE(r.closest_t, r.t_star);
  }
}

TEST(Score, SuccessWeightedExamples) {
  EXPECT_DOUBLE_EQ(success_weighted(true, 5.0, 5.0), 1.0);
  EXPECT_DOUBLE_EQ(success_weighted(true, 4.0, 8.0), 0.5);
  EXPECT_DOUBLE_EQ(success_weighted(false, 4.0, 4.0), 0.0);
  EXPECT_DOUBLE_EQ(success_weighted(true, 0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(success_weighted(true, 0.0, 3.0), 1.0);
  // Shorter than optimal cannot happen, but the clamp keeps it at 1.
  EXPECT_DOUBLE_EQ(success_weighted(true, 5.0, 4.0), 1.0);
}

TEST(Score, FailureZeroesEverything) {
  InterceptResult o;
  o.feasible = true;
  o.g_meters = 3;
  o.g_actions = 4;
  const auto s = score_episode(false, 3.0, 4, {3.0, 4}, o);
  EXPECT_EQ(s.spl + s.sna + s.dspl + s.dsna, 0.0);
}

TEST(Score, ConstantTrajectoryDsplEqualsSpl) {
  const GridMap m = dt::open_room(6, 6);
  const Pose start{{1, 1}, Heading::South};
  const std::vector<Cell> traj(30, Cell{5, 4});
  const auto o = intercept_oracle(m, start, traj);
  const StaticGoal goal{*geodesic_field(m, start.cell).meters({5, 4}), *action_distance(m, start, {5, 4})};
  for (const double p : {7.0, 9.0, 15.0}) {
    const auto s = score_episode(true, p, static_cast<int>(p) + 2, goal, o);
    EXPECT_EQ(s.dspl, s.spl);
    EXPECT_EQ(s.dsna, s.sna);
  }
}

TEST(Aggregate, Examples) {
  EpisodeScore good;
  good.success = true;
  good.spl = good.sna = good.dspl = good.dsna = 1.0;
  EpisodeScore bad;
  const std::vector<EpisodeScore> one{good};
  const auto r1 = aggregate(one);
  EXPECT_EQ(r1.sr, 1.0);
  EXPECT_EQ(r1.spl, 1.0);
  EXPECT_EQ(r1.dspl, 1.0);
  EXPECT_EQ(r1.dsna, 1.0);
  const std::vector<EpisodeScore> mixed{good, bad};
  EXPECT_DOUBLE_EQ(aggregate(mixed).dspl, 0.5);
  const std::vector<EpisodeScore> doubled{good, bad, good, bad};
  const auto a = aggregate(mixed), b = aggregate(doubled);
  EXPECT_DOUBLE_EQ(a.sr, b.sr);
  EXPECT_DOUBLE_EQ(a.spl, b.spl);
  EXPECT_DOUBLE_EQ(a.dsna, b.dsna);
  EXPECT_EQ(b.episodes, 4);
  EXPECT_THROW(aggregate(std::vector<EpisodeScore>{}), Error);
}

TEST(Aggregate, SuccessWeightedNeverExceedsSr) {
  Rng rng(4);
  std::vector<EpisodeScore> scores;
  for (int i = 0; i < 200; ++i) {
    InterceptResult o;
    o.g_meters = 1 + rng.index(10);
    o.g_actions = static_cast<int>(o.g_meters) + static_cast<int>(rng.index(3));
    const double p = o.g_meters + static_cast<double>(rng.index(5));
    scores.push_back(score_episode(rng.bernoulli(0.6), p, static_cast<int>(p) + 3,
                                   {o.g_meters + 1, o.g_actions + 1}, o));
  }
  const auto r = aggregate(scores);
  EXPECT_LE(r.dspl, r.sr);
  EXPECT_LE(r.spl, r.sr);
  EXPECT_LE(r.sna, r.sr);
  EXPECT_LE(r.dsna, r.sr);
  for (const auto& s : scores) {
    for (const double v : {s.spl, s.sna, s.dspl, s.dsna}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, s.success ? 1.0 : 0.0);
    }
  }
}
