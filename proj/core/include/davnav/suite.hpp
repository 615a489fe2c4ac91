#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "davnav/agent.hpp"
#include "davnav/run_config.hpp"
#include "davnav/soundbank.hpp"

namespace davnav {

// Maps and sounds a suite refers to.
struct World {
  std::vector<std::shared_ptr<const GridMap>> maps;
  std::shared_ptr<const SoundBank> bank;

  // Target and distractor pool for a sound condition: the training split
  // when heard, the test split when unheard.
  std::vector<std::string> pool(SoundCondition condition) const;
};

// Builds or loads everything the config names. Relative paths resolve
// against config.base_dir.
World build_world(const RunConfig& config);

struct EpisodeSpec {
  std::string id;
  std::uint64_t seed = 0;
  int map_index = 0;
  std::string target_sound;
  Pose start;
  double move_prob = 0.0;
  bool dynamic = false;
};

struct Suite {
  std::string name;
  RunConfig config;
  std::vector<EpisodeSpec> episodes;
};

// Deterministic in the config alone. Episodes whose earliest intercept
// does not fit the step budget are rejected and redrawn.
Suite generate_suite(const RunConfig& config, const World& world);

std::string suite_to_json(const Suite& suite);
Suite parse_suite(std::string_view text);
Suite load_suite(const std::filesystem::path& path);

EpisodeConfig make_episode_config(const Suite& suite, const EpisodeSpec& spec, const World& world);

// Condition tags used by the results table.
struct ConditionTag {
  SoundCondition sound = SoundCondition::Heard;
  bool complex = false;
  bool dynamic = false;
  std::string label() const;  // e.g. heard/clean/static
};
ConditionTag condition_of(const Suite& suite, const EpisodeSpec& spec);

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

// "random", "greedy", "oracle", "exec:<cmd>" or "tcp:<host>:<port>".
AgentFactory make_agent_factory(const std::string& spec, const Suite& suite, const World& world,
                                std::uint64_t agent_seed,
                                std::chrono::milliseconds timeout = std::chrono::seconds(30));

struct SuiteRun {
  std::vector<EpisodeRun> runs;  // suite order
};

// Runs every episode; with jobs > 1 each worker owns its own agent. When
// `out_dir` is set, one log per episode is written atomically under
// out_dir/logs.
SuiteRun run_suite(const Suite& suite, const World& world, const AgentFactory& factory, int jobs,
                   const std::filesystem::path& out_dir = {});

std::filesystem::path log_path(const std::filesystem::path& out_dir, const std::string& episode_id);

}  // namespace davnav
