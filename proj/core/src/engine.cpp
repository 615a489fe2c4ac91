#include "davnav/engine.hpp"

#include <array>
#include <utility>

#include "davnav/metrics.hpp"

namespace davnav {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view s) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::array<std::pair<RawAction, std::string_view>, 4> kRawNames{{
    {RawAction::Forward, "forward"},
    {RawAction::RotateLeft, "rotate_left"},
    {RawAction::RotateRight, "rotate_right"},
    {RawAction::Stop, "stop"},
}};
constexpr std::array<std::pair<ActionMode, std::string_view>, 2> kModeNames{{
    {ActionMode::Raw, "raw"},
    {ActionMode::Waypoint, "waypoint"},
}};
constexpr std::array<std::pair<RewardMode, std::string_view>, 2> kRewardNames{{
    {RewardMode::CurrentPosition, "current"},
    {RewardMode::Intersection, "intersection"},
}};
constexpr std::array<std::pair<Outcome, std::string_view>, 5> kOutcomeNames{{
    {Outcome::Running, "running"},
    {Outcome::Success, "success"},
    {Outcome::FailureTimeout, "failure_timeout"},
    {Outcome::FailureWrongStop, "failure_wrong_stop"},
    {Outcome::FailureAborted, "failure_aborted"},
}};

}  // namespace

std::string_view to_string(RawAction a) { return name_of(kRawNames, a); }
std::optional<RawAction> raw_action_from_string(std::string_view s) { return lookup(kRawNames, s); }
std::string_view to_string(ActionMode m) { return name_of(kModeNames, m); }
std::optional<ActionMode> action_mode_from_string(std::string_view s) {
  return lookup(kModeNames, s);
}
std::string_view to_string(RewardMode m) { return name_of(kRewardNames, m); }
std::optional<RewardMode> reward_mode_from_string(std::string_view s) {
  return lookup(kRewardNames, s);
}
std::string_view to_string(Outcome o) { return name_of(kOutcomeNames, o); }
std::optional<Outcome> outcome_from_string(std::string_view s) { return lookup(kOutcomeNames, s); }

Cell waypoint_cell(Pose pose, int index) {
  const int ahead = 1 - index / 3;
  const int left = 1 - index % 3;
  const Cell a = neighbor({0, 0}, pose.heading);
  const Cell l = neighbor({0, 0}, turn_left(pose.heading));
  return {pose.cell.row + ahead * a.row + left * l.row, pose.cell.col + ahead * a.col + left * l.col};
}

void EpisodeConfig::validate() const {
  if (!map) throw ConfigError("episode: no map");
  if (!bank) throw ConfigError("episode: no sound bank");
  if (!map->is_free(start.cell)) throw ConfigError("episode: start cell is occupied");
  if (step_limit <= 0) throw ConfigError("episode: step_limit must be positive");
  if (!(move_prob >= 0.0 && move_prob <= 1.0)) throw ConfigError("episode: move_prob outside [0, 1]");
  if (!bank->find(target_sound)) throw ConfigError("episode: unknown target sound " + target_sound);
  for (const auto& id : audio_pool) {
    if (!bank->find(id)) throw ConfigError("episode: unknown pool sound " + id);
  }
  if (target_start) {
    if (!map->is_free(*target_start) || !map->connected(*target_start, start.cell)) {
      throw ConfigError("episode: target start must be free and reachable");
    }
    if (*target_start == start.cell) throw ConfigError("episode: target co-located with agent");
  }
  if (sensor.ray_count <= 0 || !(sensor.fov_deg > 0) || !(sensor.max_range_m > 0)) {
    throw ConfigError("episode: invalid sensor parameters");
  }
  scenario.validate();
  acoustics.validate();
  const auto [bins, frames] = spectrogram_shape(bank->sample_rate());
  if (scenario.time_mask_param > frames || scenario.freq_mask_param > bins) {
    throw ConfigError("episode: mask parameter exceeds spectrogram axis");
  }
}

Engine::Engine(EpisodeConfig config)
    : config_(std::move(config)),
      map_(config_.map.get()),
      scenario_rng_(0),
      target_rng_(0),
      gmap_(config_.map ? config_.map->width() : 0, config_.map ? config_.map->height() : 0) {
  config_.validate();
}

const GeodesicField& Engine::field_from(Cell cell) {
  const auto key = map_->index(cell);
  auto it = fields_.find(key);
  if (it == fields_.end()) it = fields_.emplace(key, geodesic_field(*map_, cell)).first;
  return it->second;
}

namespace {

TargetState spawn_for(Rng& rng, const EpisodeConfig& config) {
  const auto& map = *config.map;
  return config.target_start
             ? spawn_target_at(rng, map, config.start.cell, *config.target_start, config.move_prob)
             : spawn_target(rng, map, config.start.cell, config.move_prob);
}

}  // namespace

std::vector<Cell> Engine::preview_target_trajectory(const EpisodeConfig& config, int steps) {
  config.validate();
  Rng rng(Rng::derive(config.seed, 2));
  auto target = spawn_for(rng, config);
  for (int i = 0; i < steps; ++i) step_target(rng, target, *config.map);
  return target.trajectory;
}

Observation Engine::reset() {
  scenario_rng_ = Rng(Rng::derive(config_.seed, 1));
  target_rng_ = Rng(Rng::derive(config_.seed, 2));
  pose_ = config_.start;
  step_index_ = 0;
  decision_ = 0;
  collided_ = false;
  gmap_ = GeometricMap(map_->width(), map_->height());

  target_ = spawn_for(target_rng_, config_);
  if (target_.cell == pose_.cell) throw Error("reset: target spawned on the agent");
  plan_ = plan_episode(scenario_rng_, config_.scenario, config_.target_sound, config_.audio_pool);

  intersection_.reset();
  if (config_.reward_mode == RewardMode::Intersection) {
    const auto preview = preview_target_trajectory(config_, config_.step_limit - 1);
    const auto oracle = intercept_oracle(*map_, config_.start, preview);
    if (oracle.feasible) intersection_ = oracle.catch_cell;
  }

  log_ = EpisodeLog{};
  log_.episode_id = config_.episode_id;
  log_.seed = config_.seed;
  log_.map_name = map_->name();
  log_.target_sound = config_.target_sound;
  log_.start = config_.start;
  log_.target_start = target_.cell;
  log_.move_prob = config_.move_prob;
  log_.mode = config_.mode;
  log_.reward_mode = config_.reward_mode;
  log_.step_limit = config_.step_limit;
  log_.complex_audio = config_.scenario.complex_enabled;
  log_.plan = plan_;

  auto obs = render_observation();
  log_.initial_audio = events_;
  started_ = true;
  return obs;
}

Observation Engine::render_observation() {
  events_ = plan_step(scenario_rng_, config_.scenario, plan_, config_.target_sound,
                      config_.audio_pool, *map_);
  const int rate = config_.bank->sample_rate();
  const auto& field = field_from(target_.cell);
  if (!field.reachable(pose_.cell)) throw Error("render: target unreachable from the agent");
  const Arrival arrival = doa_and_distance(*map_, field, pose_);

  std::vector<BinauralFrame> frames;
  auto add = [&](const std::string& id, Arrival where) {
    const auto slice = step_slice(config_.bank->get(id), step_index_, rate);
    frames.push_back(render_source(slice, rate, where, config_.acoustics));
  };
  add(config_.target_sound, arrival);
  if (plan_.second_sound_id) add(*plan_.second_sound_id, arrival);
  if (events_.distractor_active && map_->connected(*events_.distractor_cell, pose_.cell)) {
    add(*events_.distractor_id, doa_and_distance(*map_, field_from(*events_.distractor_cell), pose_));
  }
  waveform_ = mix(frames);

  Observation obs;
  obs.spectrogram = apply_spec_augment(compute_spectrogram(waveform_, config_.downsample),
                                       events_.augmentation, scenario_rng_, config_.scenario);
  obs.scan = ray_scan(*map_, pose_, config_.sensor);
  gmap_.integrate(obs.scan);
  obs.collided = collided_;
  obs.step_index = step_index_;
  return obs;
}

std::optional<int> Engine::reward_distance(Cell agent_cell) {
  const Cell anchor = (config_.reward_mode == RewardMode::Intersection && intersection_)
                          ? *intersection_
                          : target_.cell;
  return field_from(anchor).cells(agent_cell);
}

void Engine::finish(Outcome outcome) { log_.outcome = outcome; }

void Engine::abort() {
  if (!done()) finish(Outcome::FailureAborted);
}

StepResult Engine::raw_step(std::string_view label, std::optional<Move> move, bool is_stop,
                            std::optional<int> waypoint) {
  if (!started_) throw Error("step before reset");
  if (done()) throw Error("step after the episode is done");

  StepResult result;
  const auto before = reward_distance(pose_.cell);
  if (is_stop) {
    const bool caught = pose_.cell == target_.cell;
    result.reward = -kStepPenalty + (caught ? kSuccessReward : 0.0);
    ++step_index_;
    collided_ = false;
    finish(caught ? Outcome::Success : Outcome::FailureWrongStop);
  } else {
    const Pose next = move ? apply_move(*map_, pose_, *move) : pose_;
    collided_ = move == Move::Forward && next.cell == pose_.cell;
    if (next.cell != pose_.cell) log_.path_length_m += map_->resolution();
    pose_ = next;
    ++log_.action_count;
    step_target(target_rng_, target_, *map_);
    ++step_index_;
    const auto after = reward_distance(pose_.cell);
    double reward = -kStepPenalty;
    if (before && after) {
      if (*after < *before) reward += kProgressReward;
      if (*after > *before) reward -= kProgressReward;
    }
    result.reward = reward;
    if (step_index_ >= config_.step_limit) finish(Outcome::FailureTimeout);
  }

  result.observation = render_observation();
  result.done = done();
  result.info.outcome = log_.outcome;
  result.info.raw_actions = 1;
  log_.total_reward += result.reward;

  StepRecord rec;
  rec.step = step_index_;
  rec.decision = decision_;
  rec.action = std::string(label);
  rec.waypoint = waypoint;
  rec.pose = pose_;
  rec.target = target_.cell;
  rec.reward = result.reward;
  rec.collided = collided_;
  rec.audio = events_;
  log_.records.push_back(std::move(rec));
  return result;
}

StepResult Engine::step_raw(RawAction action) {
  if (!done()) ++decision_;
  switch (action) {
    case RawAction::Forward: return raw_step("forward", Move::Forward, false, std::nullopt);
    case RawAction::RotateLeft: return raw_step("rotate_left", Move::RotateLeft, false, std::nullopt);
    case RawAction::RotateRight:
      return raw_step("rotate_right", Move::RotateRight, false, std::nullopt);
    case RawAction::Stop: return raw_step("stop", std::nullopt, true, std::nullopt);
  }
  throw Error("unknown raw action");
}

StepResult Engine::step_waypoint(int index) {
  if (config_.mode != ActionMode::Waypoint) throw Error("waypoint action in raw mode");
  if (index < 0 || index > 8) throw Error("index out of range");
  if (!done()) ++decision_;
  if (index == kWaypointStop) return raw_step("stop", std::nullopt, true, index);

  const Cell goal = waypoint_cell(pose_, index);
  if (!map_->is_free(goal) || !map_->connected(goal, pose_.cell)) {
    auto r = raw_step("noop", std::nullopt, false, index);
    r.info.invalid_waypoint = true;
    return r;
  }

  auto moves = action_field(*map_, pose_).moves_to(goal);
  if (moves.size() > 4) moves.resize(4);

  StepResult total;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const Move m = moves[i];
    const std::string_view label =
        m == Move::Forward ? "forward" : (m == Move::RotateLeft ? "rotate_left" : "rotate_right");
    auto r = raw_step(label, m, false, index);
    total.reward += r.reward;
    ++total.info.raw_actions;
    if (i > 0) total.info.intermediate.push_back(std::move(total.observation));
    total.observation = std::move(r.observation);
    total.done = r.done;
    total.info.outcome = r.info.outcome;
    if (total.done || total.observation.collided) break;
  }
  return total;
}

StepResult Engine::step(const Action& action) {
  return action.is_waypoint ? step_waypoint(action.waypoint) : step_raw(action.raw);
}

}  // namespace davnav
