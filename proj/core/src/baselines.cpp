#include <algorithm>
#include <cmath>

#include "davnav/agent.hpp"
#include "davnav/geodesic.hpp"

namespace davnav {

EpisodeInfo episode_info(const EpisodeConfig& config) {
  EpisodeInfo info;
  info.episode_id = config.episode_id;
  info.seed = config.seed;
  info.mode = config.mode;
  info.step_limit = config.step_limit;
  info.sample_rate = config.bank->sample_rate();
  std::tie(info.freq_bins, info.time_frames) = spectrogram_shape(info.sample_rate);
  info.ray_count = config.sensor.ray_count;
  info.fov_deg = config.sensor.fov_deg;
  info.max_range_m = config.sensor.max_range_m;
  info.map_width = config.map->width();
  info.map_height = config.map->height();
  info.resolution = config.map->resolution();
  return info;
}

void RandomAgent::begin_episode(const EpisodeInfo& info, const EpisodeConfig*) {
  rng_ = Rng(Rng::derive(Rng::derive(seed_, 3), info.seed));
  mode_ = info.mode;
}

Action RandomAgent::act(const Observation&, const Feedback&) {
  constexpr double kStopProb = 0.05;
  const bool stop = rng_.bernoulli(kStopProb);
  if (mode_ == ActionMode::Waypoint) {
    if (stop) return Action::at_waypoint(kWaypointStop);
    const auto k = static_cast<int>(rng_.index(8));
    return Action::at_waypoint(k < kWaypointStop ? k : k + 1);
  }
  if (stop) return Action::of(RawAction::Stop);
  constexpr RawAction moves[] = {RawAction::Forward, RawAction::RotateLeft, RawAction::RotateRight};
  return Action::of(moves[rng_.index(3)]);
}

std::pair<double, double> channel_energy(const Spectrogram& spec) {
  double left = 0.0, right = 0.0;
  for (int f = 0; f < spec.freq_bins; ++f) {
    for (int t = 0; t < spec.time_frames; ++t) {
      const double l = std::expm1(static_cast<double>(spec.at(f, t, 0)));
      const double r = std::expm1(static_cast<double>(spec.at(f, t, 1)));
      left += l * l;
      right += r * r;
    }
  }
  return {left, right};
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

GreedyParams calibrate_greedy(const SoundBank& bank, const std::vector<std::string>& pool,
                              const AcousticParams& acoustics, double resolution,
                              Downsample downsample) {
  if (pool.empty()) throw ConfigError("calibrate_greedy: empty pool");
  std::vector<double> near, one_cell;
  const int rate = bank.sample_rate();
  for (const auto& id : pool) {
    const auto slice = step_slice(bank.get(id), 0, rate);
    for (const double d : {0.0, resolution}) {
      const auto spec = compute_spectrogram(render_source(slice, rate, {0.0, d}, acoustics), downsample);
      const auto [l, r] = channel_energy(spec);
      (d == 0.0 ? near : one_cell).push_back(l + r);
    }
  }
  GreedyParams params;
  params.stop_threshold = std::sqrt(median(near) * median(one_cell));
  return params;
}

Action GreedyAgent::act(const Observation& obs, const Feedback&) {
  const bool waypoints = mode_ == ActionMode::Waypoint;
  // Waypoints: ahead (1), left (3), right (5), own cell (4).
  auto choose = [&](RawAction a) {
    if (!waypoints) return Action::of(a);
    switch (a) {
      case RawAction::Forward: return Action::at_waypoint(1);
      case RawAction::RotateLeft: return Action::at_waypoint(3);
      case RawAction::RotateRight: return Action::at_waypoint(5);
      case RawAction::Stop: break;
    }
    return Action::at_waypoint(kWaypointStop);
  };

  const auto [left, right] = channel_energy(obs.spectrogram);
  const double total = left + right;
  if (total > params_.stop_threshold) return choose(RawAction::Stop);
  if (obs.collided) return choose(RawAction::RotateLeft);
  if (std::abs(left - right) <= params_.balance * total) return choose(RawAction::Forward);
  return choose(left > right ? RawAction::RotateLeft : RawAction::RotateRight);
}

InterceptResult episode_intercept(const EpisodeConfig& config) {
  auto trajectory = Engine::preview_target_trajectory(config, config.step_limit - 1);
  return intercept_oracle(*config.map, config.start, trajectory);
}

void OracleAgent::begin_episode(const EpisodeInfo&, const EpisodeConfig* privileged) {
  if (!privileged) throw Error("oracle agent needs privileged episode access");
  plan_.clear();
  next_ = 0;
  intercept_ = episode_intercept(*privileged);
  if (!intercept_.feasible) {
    plan_.push_back(RawAction::Stop);
    return;
  }
  const auto& map = *privileged->map;
  std::vector<Move> moves;
  const auto route = fewest_action_geodesic_route(map, privileged->start, intercept_.catch_cell);
  if (route && route->actions <= intercept_.t_star) {
    moves = route->moves;
  } else {
    moves = action_field(map, privileged->start).moves_to(intercept_.catch_cell);
  }
  for (const Move m : moves) {
    plan_.push_back(m == Move::Forward      ? RawAction::Forward
                    : m == Move::RotateLeft ? RawAction::RotateLeft
                                            : RawAction::RotateRight);
  }
  while (static_cast<int>(plan_.size()) < intercept_.t_star) plan_.push_back(RawAction::RotateLeft);
  plan_.push_back(RawAction::Stop);
}

Action OracleAgent::act(const Observation&, const Feedback&) {
  if (next_ >= plan_.size()) return Action::of(RawAction::Stop);
  return Action::of(plan_[next_++]);
}

std::vector<Action> decisions_from_log(const EpisodeLog& log) {
  std::vector<Action> out;
  int last = 0;
  for (const auto& r : log.records) {
    if (r.decision == last) continue;
    last = r.decision;
    if (r.waypoint) {
      out.push_back(Action::at_waypoint(*r.waypoint));
    } else {
      const auto a = raw_action_from_string(r.action);
      if (!a) throw ParseError("log: unknown action '" + r.action + "'");
      out.push_back(Action::of(*a));
    }
  }
  return out;
}

EpisodeRun run_episode(const EpisodeConfig& config, Agent& agent) {
  Engine engine(config);
  auto obs = engine.reset();
  Feedback feedback;
  try {
    agent.begin_episode(episode_info(config), &config);
    while (!engine.done()) {
      const Action action = agent.act(obs, feedback);
      auto result = engine.step(action);
      obs = std::move(result.observation);
      feedback.reward = result.reward;
      feedback.invalid_waypoint = result.info.invalid_waypoint;
      feedback.intermediate = std::move(result.info.intermediate);
    }
  } catch (const Error&) {
    engine.abort();
  }
  EpisodeRun run;
  run.log = engine.log();
  run.oracle = episode_intercept(config);
  run.score = score_log(*config.map, run.log, run.oracle);
  agent.end_episode(run.log.outcome, &run.score);
  return run;
}

}  // namespace davnav
