#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "davnav/engine.hpp"
#include "davnav/metrics.hpp"

namespace davnav {

// What any agent may know about an episode before it starts.
struct EpisodeInfo {
  std::string episode_id;
  std::uint64_t seed = 0;
  ActionMode mode = ActionMode::Raw;
  int step_limit = 500;
  int sample_rate = 16000;
  int freq_bins = 0;
  int time_frames = 0;
  int ray_count = 0;
  double fov_deg = 0.0;
  double max_range_m = 0.0;
  int map_width = 0;
  int map_height = 0;
  double resolution = 1.0;
};

EpisodeInfo episode_info(const EpisodeConfig& config);

// Result of the previous decision, delivered with the next observation.
struct Feedback {
  double reward = 0.0;
  bool invalid_waypoint = false;
  std::vector<Observation> intermediate;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  // `privileged` is null unless the agent runs in-process.
  virtual void begin_episode(const EpisodeInfo& info, const EpisodeConfig* privileged) = 0;
  virtual Action act(const Observation& obs, const Feedback& feedback) = 0;
  virtual void end_episode(Outcome, const EpisodeScore*) {}
};

// Uniform over the non-Stop actions, Stop with probability 0.05. Seeded
// from (agent seed, episode seed).
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  std::string name() const override { return "random"; }
  void begin_episode(const EpisodeInfo& info, const EpisodeConfig*) override;
  Action act(const Observation& obs, const Feedback& feedback) override;

 private:
  std::uint64_t seed_;
  Rng rng_;
  ActionMode mode_ = ActionMode::Raw;
};

struct GreedyParams {
  double stop_threshold = 0.0;  // broadband energy, both ears
  double balance = 0.05;        // |L - R| <= balance * (L + R) counts as centered
};

// Per-channel energy of a spectrogram, undoing the log(1+x) compression.
std::pair<double, double> channel_energy(const Spectrogram& spec);

// Stop threshold: geometric mean of the median energies heard at distance 0
// and at one cell, over `pool`.
GreedyParams calibrate_greedy(const SoundBank& bank, const std::vector<std::string>& pool,
                              const AcousticParams& acoustics, double resolution,
                              Downsample downsample = Downsample::Stride);

// Follows the louder ear; Forward when balanced; rotates after a
// collision; Stops above the near-field threshold.
class GreedyAgent : public Agent {
 public:
  explicit GreedyAgent(GreedyParams params) : params_(params) {}
  std::string name() const override { return "greedy"; }
  void begin_episode(const EpisodeInfo& info, const EpisodeConfig*) override { mode_ = info.mode; }
  Action act(const Observation& obs, const Feedback& feedback) override;
  const GreedyParams& params() const { return params_; }

 private:
  GreedyParams params_;
  ActionMode mode_ = ActionMode::Raw;
};

// Privileged: reads the realized trajectory, walks to the earliest
// intercept, waits by rotating and Stops once the target is there.
class OracleAgent : public Agent {
 public:
  std::string name() const override { return "oracle"; }
  void begin_episode(const EpisodeInfo& info, const EpisodeConfig* privileged) override;
  Action act(const Observation& obs, const Feedback& feedback) override;
  const InterceptResult& intercept() const { return intercept_; }

 private:
  std::vector<RawAction> plan_;
  std::size_t next_ = 0;
  InterceptResult intercept_;
};

// Replays a fixed decision sequence. Once exhausted it Stops, or fails the
// episode when `abort_when_exhausted` is set (replaying aborted runs).
class ScriptedAgent : public Agent {
 public:
  explicit ScriptedAgent(std::vector<Action> actions, bool abort_when_exhausted = false)
      : actions_(std::move(actions)), abort_(abort_when_exhausted) {}
  std::string name() const override { return "scripted"; }
  void begin_episode(const EpisodeInfo&, const EpisodeConfig*) override { next_ = 0; }
  Action act(const Observation&, const Feedback&) override {
    if (next_ < actions_.size()) return actions_[next_++];
    if (abort_) throw Error("scripted agent exhausted");
    return Action::of(RawAction::Stop);
  }

 private:
  std::vector<Action> actions_;
  bool abort_;
  std::size_t next_ = 0;
};

// Agent decisions recorded in a log, one per decision index.
std::vector<Action> decisions_from_log(const EpisodeLog& log);

// Earliest intercept over tau(0..step_limit-1), so Stop at t*+1 fits in
// the step budget.
InterceptResult episode_intercept(const EpisodeConfig& config);

// Runs one episode to completion. Agent or protocol failures end it as
// failure_aborted. The returned log is scored against episode_intercept.
struct EpisodeRun {
  EpisodeLog log;
  InterceptResult oracle;
  EpisodeScore score;
};
EpisodeRun run_episode(const EpisodeConfig& config, Agent& agent);

}  // namespace davnav
