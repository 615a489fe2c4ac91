#include <gtest/gtest.h>

#include <set>

#include "davnav/agent.hpp"
#include "davnav/episode_log.hpp"
#include "fixtures.hpp"

using namespace davnav;
namespace dt = davnav::testing;

namespace {

std::string bytes(const EpisodeRun& run) { return serialize_log({run.log, run.score, run.oracle}); }

EpisodeConfig dynamic_episode(std::uint64_t seed, double p, ActionMode mode = ActionMode::Raw) {
  auto map = dt::shared(generate_map(seed % 7 + 1, {}));
  auto c = dt::static_episode(map, {map->free_cells()[seed % map->free_cells().size()], Heading::East}, {}, seed);
  c.target_start.reset();
  c.move_prob = p;
  c.mode = mode;
  return c;
}

}  // namespace

TEST(RandomAgent, SeedsGiveDistinctLogsWithinTheLimit) {
  std::set<std::string> logs;
  for (const std::uint64_t agent_seed : {1u, 2u, 3u}) {
    auto cfg = dynamic_episode(4, 0.3);
    cfg.step_limit = 60;
    RandomAgent agent(agent_seed);
    const auto run = run_episode(cfg, agent);
    EXPECT_LE(run.log.records.size(), 60u);
    logs.insert(bytes(run));
  }
  EXPECT_EQ(logs.size(), 3u);
}

TEST(RandomAgent, StopProbability) {
  RandomAgent agent(9);
  EpisodeInfo info;
  info.seed = 5;
  agent.begin_episode(info, nullptr);
  int stops = 0;
  for (int i = 0; i < 20000; ++i) stops += agent.act({}, {}) == Action::of(RawAction::Stop);
  EXPECT_NEAR(stops / 20000.0, 0.05, 0.006);
  info.mode = ActionMode::Waypoint;
  agent.begin_episode(info, nullptr);
  for (int i = 0; i < 500; ++i) {
    const auto a = agent.act({}, {});
    ASSERT_TRUE(a.is_waypoint);
    ASSERT_GE(a.waypoint, 0);
    ASSERT_LE(a.waypoint, 8);
  }
}

TEST(GreedyAgent, PureLeftSourceRotatesLeft) {
  auto cfg = dt::static_episode(dt::shared(dt::open_room(9, 9)), {{5, 6}, Heading::North}, {5, 2});
  Engine e(cfg);
  const auto obs = e.reset();
  const auto arrival = doa_and_distance(*cfg.map, cfg.start, {5, 2});
  ASSERT_DOUBLE_EQ(arrival.azimuth, std::numbers::pi / 2);
  const auto params = calibrate_greedy(*cfg.bank, cfg.audio_pool, cfg.acoustics, 1.0);
  GreedyAgent greedy(params);
  greedy.begin_episode(episode_info(cfg), nullptr);
  EXPECT_EQ(greedy.act(obs, {}), Action::of(RawAction::RotateLeft));
}

TEST(GreedyAgent, CorridorTargetDeadAhead) {
  auto cfg = dt::static_episode(dt::shared(dt::map_from_rows({"##########", "#........#", "##########"})),
                                {{1, 1}, Heading::East}, {1, 8});
  cfg.target_sound = "snd000";  // harmonic tone, stationary energy
  const auto params = calibrate_greedy(*cfg.bank, {cfg.target_sound}, cfg.acoustics, 1.0);
  GreedyAgent greedy(params);
  const auto run = run_episode(cfg, greedy);
  EXPECT_EQ(run.log.outcome, Outcome::Success);
  EXPECT_EQ(run.log.records.size(), 8u);
  EXPECT_DOUBLE_EQ(run.score.spl, 1.0);
}

TEST(GreedyAgent, WaypointModeMapping) {
  GreedyAgent g({1e300, 0.05});
  EpisodeInfo info;
  info.mode = ActionMode::Waypoint;
  g.begin_episode(info, nullptr);
  Observation obs;
  obs.spectrogram = compute_spectrogram(silent_frame(16000));
  EXPECT_EQ(g.act(obs, {}), Action::at_waypoint(1));  // balanced silence: ahead
  obs.collided = true;
  EXPECT_EQ(g.act(obs, {}), Action::at_waypoint(3));
  GreedyAgent stopper({-1.0, 0.05});
  stopper.begin_episode(info, nullptr);
  EXPECT_EQ(stopper.act(obs, {}), Action::at_waypoint(kWaypointStop));
}

TEST(Calibration, ThresholdSitsBetweenNearAndOneCell) {
  const auto bank = dt::small_bank();
  const auto ids = bank->ids(Split::Train);
  AcousticParams acoustics;
  const auto p = calibrate_greedy(*bank, ids, acoustics, 1.0);
  // For a single sound the threshold is the geometric mean of its two
  // energies, which differ by the squared gain ratio.
  const auto one = calibrate_greedy(*bank, {ids.front()}, acoustics, 1.0);
  const auto slice = step_slice(bank->get(ids.front()), 0, 16000);
  const auto [l0, r0] = channel_energy(compute_spectrogram(render_source(slice, 16000, {0.0, 0.0}, acoustics)));
  const auto [l1, r1] = channel_energy(compute_spectrogram(render_source(slice, 16000, {0.0, 1.0}, acoustics)));
  EXPECT_NEAR(one.stop_threshold, std::sqrt((l0 + r0) * (l1 + r1)), 1e-9 * one.stop_threshold);
  EXPECT_GT(l0 + r0, one.stop_threshold);
  EXPECT_LT(l1 + r1, one.stop_threshold);
  EXPECT_GT(p.stop_threshold, 0.0);
  EXPECT_THROW(calibrate_greedy(*bank, {}, acoustics, 1.0), ConfigError);
}

TEST(OracleAgent, CatchesEveryFeasibleEpisode) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const double p = seed % 2 ? 0.1 : 0.3;
    const auto cfg = dynamic_episode(seed, p, seed % 3 ? ActionMode::Raw : ActionMode::Waypoint);
    if (!episode_intercept(cfg).feasible) continue;
    ++checked;
    OracleAgent oracle;
    const auto run = run_episode(cfg, oracle);
    ASSERT_EQ(run.log.outcome, Outcome::Success) << "seed " << seed;
    EXPECT_EQ(static_cast<int>(run.log.records.size()), run.oracle.t_star + 1);
    EXPECT_DOUBLE_EQ(run.score.dspl, 1.0) << "seed " << seed;
  }
  EXPECT_GE(checked, 35);
}

TEST(OracleAgent, StaticEpisodesScoreFullSpl) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto cfg = dynamic_episode(seed, 0.0);
    OracleAgent oracle;
    const auto run = run_episode(cfg, oracle);
    ASSERT_EQ(run.log.outcome, Outcome::Success);
    EXPECT_DOUBLE_EQ(run.score.spl, 1.0);
    EXPECT_DOUBLE_EQ(run.score.sna, 1.0);
    EXPECT_DOUBLE_EQ(run.score.dspl, 1.0);
  }
}

TEST(OracleAgent, NeedsPrivilegedAccess) {
  OracleAgent oracle;
  EXPECT_THROW(oracle.begin_episode({}, nullptr), Error);
}

TEST(Replay, DecisionsReproduceTheLog) {
  for (const auto mode : {ActionMode::Raw, ActionMode::Waypoint}) {
    auto cfg = dynamic_episode(11, 0.3, mode);
    cfg.scenario.complex_enabled = true;
    cfg.step_limit = 80;
    RandomAgent agent(4);
    const auto first = run_episode(cfg, agent);
    ScriptedAgent script(decisions_from_log(first.log), true);
    const auto again = run_episode(cfg, script);
    EXPECT_EQ(bytes(first), bytes(again));
  }
}

TEST(RunEpisode, AgentFailureAborts) {
  const auto cfg = dynamic_episode(3, 0.3);
  ScriptedAgent exhausted({Action::of(RawAction::Forward)}, true);
  const auto run = run_episode(cfg, exhausted);
  EXPECT_EQ(run.log.outcome, Outcome::FailureAborted);
  EXPECT_EQ(run.log.records.size(), 1u);
  EXPECT_FALSE(run.score.success);
}

TEST(RunEpisode, ImmediateStopFails) {
  const auto cfg = dynamic_episode(3, 0.3);
  ScriptedAgent stopper({});
  const auto run = run_episode(cfg, stopper);
  EXPECT_EQ(run.log.outcome, Outcome::FailureWrongStop);
  EXPECT_EQ(run.log.records.size(), 1u);
}
