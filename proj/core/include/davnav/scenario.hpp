#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "davnav/acoustics.hpp"
#include "davnav/gridmap.hpp"
#include "davnav/rng.hpp"

namespace davnav {

struct ScenarioConfig {
  bool complex_enabled = false;
  double p_second_sound = 0.5;
  double p_distractor_episode = 0.5;
  double p_distractor_step = 0.5;
  int time_mask_param = 12;  // frames
  int freq_mask_param = 12;  // bins

  void validate() const;
};

struct EpisodeAudioPlan {
  std::optional<std::string> second_sound_id;
  bool distractor_enabled = false;

  friend bool operator==(const EpisodeAudioPlan&, const EpisodeAudioPlan&) = default;
};

enum class Augmentation { None, TimeMask, FreqMask, Both };

std::string_view to_string(Augmentation a);
std::optional<Augmentation> augmentation_from_string(std::string_view s);

struct StepAudioEvents {
  bool distractor_active = false;
  std::optional<std::string> distractor_id;
  std::optional<Cell> distractor_cell;
  Augmentation augmentation = Augmentation::None;

  friend bool operator==(const StepAudioEvents&, const StepAudioEvents&) = default;
};

// Episode-level draws. `pool` holds the sounds allowed as second sound or
// distractor (the training split for heard runs); the target is excluded.
// Throws ConfigError when complex audio is enabled and fewer than two
// sounds are available.
EpisodeAudioPlan plan_episode(Rng& rng, const ScenarioConfig& config, std::string_view target_id,
                              const std::vector<std::string>& pool);

// Per-step draws: distractor activity, sound and cell, then the
// augmentation category (none with probability 1/2, otherwise one of the
// three masks uniformly).
StepAudioEvents plan_step(Rng& rng, const ScenarioConfig& config, const EpisodeAudioPlan& plan,
                          std::string_view target_id, const std::vector<std::string>& pool,
                          const GridMap& map);

// Zeroes one contiguous block of frames and/or bins in both channels.
// Throws ConfigError when a mask parameter exceeds its axis.
Spectrogram apply_spec_augment(Spectrogram spec, Augmentation kind, Rng& rng,
                               const ScenarioConfig& config);

}  // namespace davnav
