#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "davnav/acoustics.hpp"
#include "davnav/dynamics.hpp"
#include "davnav/geodesic.hpp"
#include "davnav/gridmap.hpp"
#include "davnav/raycast.hpp"
#include "davnav/rng.hpp"
#include "davnav/scenario.hpp"
#include "davnav/soundbank.hpp"

namespace davnav {

enum class RawAction : std::uint8_t { Forward, RotateLeft, RotateRight, Stop };
enum class ActionMode : std::uint8_t { Raw, Waypoint };
enum class RewardMode : std::uint8_t { CurrentPosition, Intersection };
enum class Outcome : std::uint8_t { Running, Success, FailureTimeout, FailureWrongStop, FailureAborted };

std::string_view to_string(RawAction a);
std::optional<RawAction> raw_action_from_string(std::string_view s);
std::string_view to_string(ActionMode m);
std::optional<ActionMode> action_mode_from_string(std::string_view s);
std::string_view to_string(RewardMode m);
std::optional<RewardMode> reward_mode_from_string(std::string_view s);
std::string_view to_string(Outcome o);
std::optional<Outcome> outcome_from_string(std::string_view s);

// A raw action or an index into the egocentric 3x3 waypoint map.
// Waypoint index = 3*row + col with row 0 ahead of the agent, col 0 to its
// left; index 4 (the agent's own cell) means Stop.
struct Action {
  bool is_waypoint = false;
  RawAction raw = RawAction::Stop;
  int waypoint = 4;

  static Action of(RawAction a) { return {false, a, 4}; }
  static Action at_waypoint(int index) { return {true, RawAction::Stop, index}; }
  friend bool operator==(const Action&, const Action&) = default;
};

inline constexpr int kWaypointStop = 4;

// Cell addressed by a waypoint index from a pose.
Cell waypoint_cell(Pose pose, int index);

struct Observation {
  Spectrogram spectrogram;
  RangeScan scan;
  bool collided = false;
  int step_index = 0;
};

struct EpisodeConfig {
  std::string episode_id = "episode";
  std::uint64_t seed = 0;
  std::shared_ptr<const GridMap> map;
  std::shared_ptr<const SoundBank> bank;
  std::string target_sound;
  std::vector<std::string> audio_pool;  // second sounds and distractors
  Pose start;
  std::optional<Cell> target_start;  // fixed spawn for scripted runs
  ScenarioConfig scenario;
  AcousticParams acoustics;
  ScanParams sensor;
  Downsample downsample = Downsample::Stride;
  double move_prob = 0.3;
  ActionMode mode = ActionMode::Raw;
  RewardMode reward_mode = RewardMode::CurrentPosition;
  int step_limit = 500;

  // Throws ConfigError on an unusable configuration.
  void validate() const;
};

// Per raw step record of an episode.
struct StepRecord {
  int step = 0;                 // 1-based index of the raw step
  int decision = 0;             // 1-based index of the agent decision
  std::string action;           // forward, rotate_left, rotate_right, stop, noop
  std::optional<int> waypoint;  // decision that produced this step
  Pose pose;                    // after the step
  Cell target;                  // after the step
  double reward = 0.0;
  bool collided = false;
  StepAudioEvents audio;        // events rendered into the observation
};

struct EpisodeLog {
  std::string episode_id;
  std::uint64_t seed = 0;
  std::string map_name;
  std::string target_sound;
  Pose start;
  Cell target_start;
  double move_prob = 0.0;
  ActionMode mode = ActionMode::Raw;
  RewardMode reward_mode = RewardMode::CurrentPosition;
  int step_limit = 0;
  bool complex_audio = false;
  EpisodeAudioPlan plan;
  StepAudioEvents initial_audio;
  std::vector<StepRecord> records;
  Outcome outcome = Outcome::Running;
  double path_length_m = 0.0;
  int action_count = 0;  // executed raw actions other than Stop
  double total_reward = 0.0;
};

struct StepInfo {
  Outcome outcome = Outcome::Running;
  bool invalid_waypoint = false;
  int raw_actions = 0;
  std::vector<Observation> intermediate;  // waypoint mode, all but the last
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

inline constexpr double kSuccessReward = 10.0;
inline constexpr double kProgressReward = 0.25;
inline constexpr double kStepPenalty = 0.01;

// One episode. Within a raw step: agent action, then target step, then
// rendering. All randomness comes from streams derived from the seed.
class Engine {
 public:
  explicit Engine(EpisodeConfig config);

  // Resets to the start pose and returns the first observation.
  Observation reset();

  // Raw actions are accepted in both modes, waypoints only in waypoint mode.
  // Throws Error after the episode is done.
  StepResult step(const Action& action);
  StepResult step_raw(RawAction action);
  StepResult step_waypoint(int index);

  // Marks a running episode as aborted (protocol failures).
  void abort();

  Observation render_observation();

  const EpisodeConfig& config() const { return config_; }
  Pose pose() const { return pose_; }
  const TargetState& target() const { return target_; }
  const GeometricMap& geometric_map() const { return gmap_; }
  const EpisodeLog& log() const { return log_; }
  bool done() const { return log_.outcome != Outcome::Running; }
  Outcome outcome() const { return log_.outcome; }
  int step_index() const { return step_index_; }
  const EpisodeAudioPlan& audio_plan() const { return plan_; }
  const StepAudioEvents& last_audio_events() const { return events_; }
  const BinauralFrame& last_waveform() const { return waveform_; }
  std::optional<Cell> intersection_cell() const { return intersection_; }

  // Geodesic field rooted at `cell`, cached per engine.
  const GeodesicField& field_from(Cell cell);

  // Target cells tau(0..steps) for this configuration. The realized
  // trajectory of an episode is always a prefix, whatever the agent does.
  static std::vector<Cell> preview_target_trajectory(const EpisodeConfig& config, int steps);

 private:
  StepResult raw_step(std::string_view label, std::optional<Move> move, bool is_stop,
                      std::optional<int> waypoint);
  std::optional<int> reward_distance(Cell agent_cell);
  void finish(Outcome outcome);

  EpisodeConfig config_;
  const GridMap* map_;
  Rng scenario_rng_;
  Rng target_rng_;
  Pose pose_;
  TargetState target_;
  GeometricMap gmap_;
  EpisodeAudioPlan plan_;
  StepAudioEvents events_;
  BinauralFrame waveform_;
  std::optional<Cell> intersection_;
  EpisodeLog log_;
  int step_index_ = 0;
  int decision_ = 0;
  bool collided_ = false;
  bool started_ = false;
  std::unordered_map<std::size_t, GeodesicField> fields_;
};

}  // namespace davnav
