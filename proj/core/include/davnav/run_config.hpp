#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "davnav/acoustics.hpp"
#include "davnav/engine.hpp"
#include "davnav/gridmap.hpp"
#include "davnav/raycast.hpp"
#include "davnav/scenario.hpp"

namespace davnav {

inline constexpr int kRunConfigVersion = 1;

struct MapSource {
  bool generate = true;
  std::uint64_t seed = 1;
  int count = 4;
  MapGenParams params;
  std::vector<std::string> paths;  // used when generate is false
};

struct SoundSource {
  bool synthesize = true;
  std::uint64_t seed = 7;
  int count = 12;
  int sample_rate = 16000;
  double duration_s = 3.0;
  std::string dir;  // used when synthesize is false
};

enum class SoundCondition { Heard, Unheard };
std::string_view to_string(SoundCondition c);

// Versioned JSON run configuration. Relative paths resolve against
// `base_dir`, normally the directory holding the file.
struct RunConfig {
  int version = kRunConfigVersion;
  std::string name = "suite";
  std::uint64_t seed = 1;
  MapSource maps;
  SoundSource sounds;
  ScenarioConfig scenario;
  AcousticParams acoustics;
  ScanParams sensor;
  Downsample downsample = Downsample::Stride;
  std::vector<double> move_probs{0.3};  // dynamic episodes draw p from this list
  double dynamic_fraction = 0.5;
  ActionMode mode = ActionMode::Raw;
  RewardMode reward_mode = RewardMode::CurrentPosition;
  int step_limit = 500;
  int episodes = 50;
  SoundCondition split = SoundCondition::Heard;
  std::filesystem::path base_dir;

  void validate() const;
};

// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
std::string run_config_to_json(const RunConfig& config);

}  // namespace davnav
