#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "davnav/agent.hpp"
#include "davnav/episode_log.hpp"
#include "davnav/gridmap.hpp"
#include "davnav/plot.hpp"
#include "davnav/protocol.hpp"
#include "davnav/report.hpp"
#include "davnav/run_config.hpp"
#include "davnav/soundbank.hpp"
#include "davnav/suite.hpp"

namespace fs = std::filesystem;
using namespace davnav;

namespace {

// Flags shared by the commands that build or run suites.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  std::optional<double> p;
  bool complex = false;
  std::optional<std::string> mode;
  std::optional<std::string> reward;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Suite seed");
    cmd->add_option("--episodes", episodes, "Episode count");
    cmd->add_option("--p", p, "Target move probability for dynamic episodes");
    cmd->add_flag("--complex", complex, "Enable complex audio scenarios");
    cmd->add_option("--mode", mode, "Action mode")->check(CLI::IsMember({"raw", "waypoint"}));
    cmd->add_option("--reward", reward, "Dense reward distance")
        ->check(CLI::IsMember({"current", "intersection"}));
  }

  void apply(RunConfig& c) const {
    if (seed) c.seed = *seed;
    if (episodes) c.episodes = *episodes;
    if (p) c.move_probs = {*p};
    if (complex) c.scenario.complex_enabled = true;
    if (mode) c.mode = *action_mode_from_string(*mode);
    if (reward) c.reward_mode = *reward_mode_from_string(*reward);
    c.validate();
  }
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("davnav");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("DAVNAV_LOG");
  spdlog::set_level(level && std::string(level) == "debug" ? spdlog::level::debug
                                                           : spdlog::level::info);
}

RunConfig config_or_default(const std::string& path) {
  return path.empty() ? RunConfig{} : load_run_config(path);
}

// A run directory holds suite.json next to logs/.
Suite suite_for_log(const fs::path& log, const std::string& explicit_suite) {
  if (!explicit_suite.empty()) return load_suite(explicit_suite);
  const auto guess = log.parent_path().parent_path() / "suite.json";
  if (!fs::exists(guess)) throw Error("no suite.json next to the log; pass --suite");
  return load_suite(guess);
}

const EpisodeSpec& find_episode(const Suite& suite, const std::string& id) {
  for (const auto& e : suite.episodes) {
    if (e.id == id) return e;
  }
  throw Error("episode " + id + " is not in the suite");
}

std::vector<ScoredEpisode> scored(const Suite& suite, const SuiteRun& run) {
  std::vector<ScoredEpisode> out;
  for (std::size_t i = 0; i < suite.episodes.size(); ++i) {
    out.push_back({suite.episodes[i].id, condition_of(suite, suite.episodes[i]), run.runs[i].score});
  }
  return out;
}

int cmd_gen_maps(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<int> count, const fs::path& out) {
  auto c = config_or_default(config_path);
  if (seed) c.maps.seed = *seed;
  if (count) c.maps.count = *count;
  c.maps.generate = true;
  const auto world = build_world(c);
  fs::create_directories(out);
  for (const auto& m : world.maps) {
    save_map(*m, out / (m->name() + ".davmap"));
    spdlog::info("wrote {} ({}x{}, {} free cells)", (out / (m->name() + ".davmap")).string(),
                 m->width(), m->height(), m->free_cells().size());
  }
  return 0;
}

int cmd_gen_sounds(std::uint64_t seed, int count, int rate, double duration, const fs::path& out) {
  const auto bank = synthesize_bank(seed, count, rate, duration);
  save_bank(bank, out);
  const auto split = bank.split();
  spdlog::info("wrote {} sounds to {} (train {}, val {}, test {})", bank.size(), out.string(),
               split.train.size(), split.val.size(), split.test.size());
  return 0;
}

int cmd_gen_suite(const std::string& config_path, const Overrides& ov, const fs::path& out) {
  auto c = config_or_default(config_path);
  ov.apply(c);
  const auto world = build_world(c);
  const auto suite = generate_suite(c, world);
  write_file_atomic(out / "suite.json", suite_to_json(suite));
  spdlog::info("wrote {} with {} episodes", (out / "suite.json").string(), suite.episodes.size());
  return 0;
}

int cmd_run_suite(const std::string& config_path, const std::string& suite_path,
                  const Overrides& ov, const std::string& agent, std::uint64_t agent_seed, int jobs,
                  double timeout_s, const fs::path& out) {
  Suite suite;
  if (!suite_path.empty()) {
    suite = load_suite(suite_path);
  } else {
    auto c = config_or_default(config_path);
    ov.apply(c);
    suite = generate_suite(c, build_world(c));
  }
  const auto world = build_world(suite.config);
  const auto timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
  const bool remote = agent.rfind("exec:", 0) == 0 || agent.rfind("tcp:", 0) == 0;
  if (remote && agent.rfind("tcp:", 0) == 0 && jobs > 1) {
    spdlog::warn("tcp agents run with a single worker");
    jobs = 1;
  }
  fs::create_directories(out);
  write_file_atomic(out / "suite.json", suite_to_json(suite));
  spdlog::info("running {} episodes with agent {} ({} worker(s))", suite.episodes.size(), agent, jobs);
  const auto run = run_suite(suite, world, make_agent_factory(agent, suite, world, agent_seed, timeout),
                             jobs, out);
  const auto episodes = scored(suite, run);
  const auto table = results_table(episodes);
  write_file_atomic(out / "results.tsv", table);
  write_file_atomic(out / "results.json", results_json(suite.name, agent, episodes));
  std::cout << table;
  return 0;
}

int cmd_score(const fs::path& run_dir, const std::string& suite_path) {
  const auto suite = load_suite(suite_path.empty() ? run_dir / "suite.json" : fs::path(suite_path));
  const auto world = build_world(suite.config);
  std::vector<ScoredEpisode> episodes;
  int mismatches = 0;
  for (const auto& spec : suite.episodes) {
    const auto path = log_path(run_dir, spec.id);
    if (!fs::exists(path)) throw Error("missing log " + path.string());
    const auto logged = load_log(path);
    const auto config = make_episode_config(suite, spec, world);
    const auto oracle = episode_intercept(config);
    const auto score = score_log(*config.map, logged.log, oracle);
    if (logged.score && (logged.score->dspl != score.dspl || logged.score->spl != score.spl)) {
      spdlog::warn("{}: stored scores differ from recomputed scores", spec.id);
      ++mismatches;
    }
    episodes.push_back({spec.id, condition_of(suite, spec), score});
  }
  const auto table = results_table(episodes);
  std::cout << table;
  return mismatches == 0 ? 0 : 1;
}

int cmd_replay(const fs::path& log, const std::string& suite_path) {
  const auto suite = suite_for_log(log, suite_path);
  const auto world = build_world(suite.config);
  const auto original = read_file(log);
  const auto logged = parse_log(original);
  const auto& spec = find_episode(suite, logged.log.episode_id);
  ScriptedAgent agent(decisions_from_log(logged.log),
                      logged.log.outcome == Outcome::FailureAborted);
  const auto run = run_episode(make_episode_config(suite, spec, world), agent);
  const auto again = serialize_log({run.log, run.score, run.oracle});
  if (again == original) {
    std::cout << "identical\n";
    return 0;
  }
  std::cout << "differs\n";
  return 1;
}

int cmd_plot(const fs::path& log, const std::string& suite_path, const fs::path& out) {
  const auto suite = suite_for_log(log, suite_path);
  const auto world = build_world(suite.config);
  const auto logged = load_log(log);
  const auto& spec = find_episode(suite, logged.log.episode_id);
  const auto config = make_episode_config(suite, spec, world);
  const auto oracle = episode_intercept(config);
  write_file_atomic(out, plot_episode_svg(*config.map, logged.log, oracle));
  spdlog::info("wrote {}", out.string());
  return 0;
}

int cmd_agent(const std::string& policy, const std::string& connect, const std::string& config_path,
              std::optional<double> threshold, std::uint64_t seed) {
  std::unique_ptr<Agent> agent;
  if (policy == "random") {
    agent = std::make_unique<RandomAgent>(seed);
  } else {
    GreedyParams params;
    if (threshold) {
      params.stop_threshold = *threshold;
    } else {
      const auto c = config_or_default(config_path);
      const auto world = build_world(c);
      params = calibrate_greedy(*world.bank, world.pool(SoundCondition::Heard), c.acoustics,
                                world.maps.front()->resolution(), c.downsample);
    }
    agent = std::make_unique<GreedyAgent>(params);
  }
  std::unique_ptr<LineChannel> channel;
  if (connect.empty() || connect == "stdio") {
    channel = std::make_unique<FdChannel>(::dup(0), ::dup(1));
  } else if (connect.rfind("tcp:", 0) == 0) {
    const auto rest = connect.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw ConfigError("--connect must be tcp:<host>:<port>");
    channel = tcp_connect(rest.substr(0, colon), std::stoi(rest.substr(colon + 1)));
  } else {
    throw ConfigError("--connect must be stdio or tcp:<host>:<port>");
  }
  const int played = run_agent_client(*channel, *agent);
  spdlog::debug("agent played {} episodes", played);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"davnav: dynamic audio-visual navigation benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, suite_path, agent_name = "random", log_file, policy = "greedy", connect;
  fs::path out = "out";
  Overrides ov;
  std::optional<std::uint64_t> map_seed;
  std::optional<int> map_count;
  std::uint64_t sound_seed = 7, agent_seed = 0;
  int sound_count = 12, rate = 16000, jobs = 1;
  double duration = 3.0, timeout_s = 30.0;
  std::optional<double> threshold;

  auto* gen_maps = app.add_subcommand("gen-maps", "Generate map files");
  gen_maps->add_option("--config", config_path, "Run config (maps section)");
  gen_maps->add_option("--seed", map_seed, "Map generator seed");
  gen_maps->add_option("--count", map_count, "Number of maps");
  gen_maps->add_option("--out", out, "Output directory");

  auto* gen_sounds = app.add_subcommand("gen-sounds", "Synthesize a sound bank");
  gen_sounds->add_option("--seed", sound_seed, "Synthesis seed");
  gen_sounds->add_option("--count", sound_count, "Number of sounds");
  gen_sounds->add_option("--rate", rate, "Sample rate")->check(CLI::IsMember({16000, 44100}));
  gen_sounds->add_option("--duration", duration, "Seconds per sound");
  gen_sounds->add_option("--out", out, "Output directory");

  auto* gen_suite = app.add_subcommand("gen-suite", "Generate a benchmark suite");
  gen_suite->add_option("--config", config_path, "Run config");
  gen_suite->add_option("--out", out, "Output directory");
  ov.attach(gen_suite);

  auto* run = app.add_subcommand("run-suite", "Run an agent over a suite");
  run->add_option("--config", config_path, "Run config (a suite is generated from it)");
  run->add_option("--suite", suite_path, "Existing suite.json");
  run->add_option("--agent", agent_name, "random | greedy | oracle | exec:<cmd> | tcp:<host>:<port>");
  run->add_option("--agent-seed", agent_seed, "Seed of the random agent");
  run->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
  run->add_option("--timeout", timeout_s, "Seconds allowed per remote action");
  run->add_option("--out", out, "Output directory");
  ov.attach(run);

  auto* score = app.add_subcommand("score", "Score the logs of a run directory");
  score->add_option("--out", out, "Run directory")->required();
  score->add_option("--suite", suite_path, "Suite file (default: <run>/suite.json)");

  auto* replay = app.add_subcommand("replay", "Re-execute a log and compare bytes");
  replay->add_option("log", log_file, "Episode log")->required();
  replay->add_option("--suite", suite_path, "Suite file");

  auto* plot = app.add_subcommand("plot", "Render an episode as SVG");
  plot->add_option("log", log_file, "Episode log")->required();
  plot->add_option("--suite", suite_path, "Suite file");
  plot->add_option("--out", out, "Output SVG file")->required();

  auto* agent = app.add_subcommand("agent", "Run a baseline policy as a protocol client");
  agent->add_option("--policy", policy, "greedy | random")->check(CLI::IsMember({"greedy", "random"}));
  agent->add_option("--connect", connect, "stdio (default) or tcp:<host>:<port>");
  agent->add_option("--config", config_path, "Run config used to calibrate the greedy policy");
  agent->add_option("--threshold", threshold, "Greedy stop threshold");
  agent->add_option("--seed", agent_seed, "Seed of the random policy");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_maps) return cmd_gen_maps(config_path, map_seed, map_count, out);
    if (*gen_sounds) return cmd_gen_sounds(sound_seed, sound_count, rate, duration, out);
    if (*gen_suite) return cmd_gen_suite(config_path, ov, out);
    if (*run) return cmd_run_suite(config_path, suite_path, ov, agent_name, agent_seed, jobs, timeout_s, out);
    if (*score) return cmd_score(out, suite_path);
    if (*replay) return cmd_replay(log_file, suite_path);
    if (*plot) return cmd_plot(log_file, suite_path, out);
    if (*agent) return cmd_agent(policy, connect, config_path, threshold, agent_seed);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
  return 0;
}
