#include "davnav/suite.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "davnav/episode_log.hpp"
#include "davnav/protocol.hpp"

namespace davnav {

using nlohmann::json;

std::vector<std::string> World::pool(SoundCondition condition) const {
  return bank->ids(condition == SoundCondition::Heard ? Split::Train : Split::Test);
}

namespace {

std::filesystem::path resolve(const RunConfig& config, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || config.base_dir.empty() ? path : config.base_dir / path;
}

}  // namespace

World build_world(const RunConfig& config) {
  World world;
  if (config.maps.generate) {
    for (int i = 0; i < config.maps.count; ++i) {
      auto params = config.maps.params;
      params.name = "map" + std::to_string(i);
      world.maps.push_back(std::make_shared<const GridMap>(
          generate_map(Rng::derive(config.maps.seed, static_cast<std::uint64_t>(i)), params)));
    }
  } else {
    for (const auto& p : config.maps.paths) {
      world.maps.push_back(std::make_shared<const GridMap>(load_map(resolve(config, p))));
    }
  }
  if (config.sounds.synthesize) {
    world.bank = std::make_shared<const SoundBank>(synthesize_bank(
        config.sounds.seed, config.sounds.count, config.sounds.sample_rate, config.sounds.duration_s));
  } else {
    world.bank = std::make_shared<const SoundBank>(
        load_bank(resolve(config, config.sounds.dir), config.sounds.sample_rate));
  }
  return world;
}

std::string ConditionTag::label() const {
  return std::string(to_string(sound)) + "/" + (complex ? "complex" : "clean") + "/" +
         (dynamic ? "dynamic" : "static");
}

ConditionTag condition_of(const Suite& suite, const EpisodeSpec& spec) {
  return {suite.config.split, suite.config.scenario.complex_enabled, spec.dynamic};
}

EpisodeConfig make_episode_config(const Suite& suite, const EpisodeSpec& spec, const World& world) {
  if (spec.map_index < 0 || spec.map_index >= static_cast<int>(world.maps.size())) {
    throw ConfigError("episode " + spec.id + ": map index out of range");
  }
  const auto& rc = suite.config;
  EpisodeConfig c;
  c.episode_id = spec.id;
  c.seed = spec.seed;
  c.map = world.maps[static_cast<std::size_t>(spec.map_index)];
  c.bank = world.bank;
  c.target_sound = spec.target_sound;
  c.audio_pool = world.pool(rc.split);
  c.start = spec.start;
  c.scenario = rc.scenario;
  c.acoustics = rc.acoustics;
  c.sensor = rc.sensor;
  c.downsample = rc.downsample;
  c.move_prob = spec.move_prob;
  c.mode = rc.mode;
  c.reward_mode = rc.reward_mode;
  c.step_limit = rc.step_limit;
  return c;
}

Suite generate_suite(const RunConfig& config, const World& world) {
  Suite suite;
  suite.name = config.name;
  suite.config = config;
  // Make paths absolute so the suite file stays valid wherever it is copied.
  if (!config.maps.generate) {
    for (auto& p : suite.config.maps.paths) {
      p = std::filesystem::absolute(resolve(config, p)).lexically_normal().string();
    }
  }
  if (!config.sounds.synthesize) {
    suite.config.sounds.dir =
        std::filesystem::absolute(resolve(config, config.sounds.dir)).lexically_normal().string();
  }
  suite.config.base_dir.clear();

  const auto targets = world.pool(config.split);
  if (targets.empty()) throw ConfigError("generate_suite: no target sounds for the chosen split");

  std::set<std::uint64_t> seeds;
  std::uint64_t draw = 0;
  constexpr int kMaxAttempts = 1000;
  for (int i = 0; i < config.episodes; ++i) {
    // Interleave static and dynamic episodes at the requested fraction.
    const bool dynamic = std::floor((i + 1) * config.dynamic_fraction) >
                         std::floor(i * config.dynamic_fraction);
    bool accepted = false;
    for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
      const std::uint64_t seed = Rng::derive(config.seed, draw++);
      if (!seeds.insert(seed).second) continue;
      Rng rng(seed);
      EpisodeSpec spec;
      char id[32];
      std::snprintf(id, sizeof id, "ep%04d", i);
      spec.id = id;
      spec.seed = seed;
      spec.map_index = static_cast<int>(rng.index(world.maps.size()));
      const auto& map = *world.maps[static_cast<std::size_t>(spec.map_index)];
      const auto& cells = map.free_cells();
      spec.start.cell = cells[rng.index(cells.size())];
      spec.start.heading = static_cast<Heading>(rng.index(4));
      spec.target_sound = targets[rng.index(targets.size())];
      spec.dynamic = dynamic;
      spec.move_prob = dynamic ? config.move_probs[rng.index(config.move_probs.size())] : 0.0;

      const auto cfg = make_episode_config(suite, spec, world);
      try {
        if (!episode_intercept(cfg).feasible) continue;
      } catch (const Error&) {
        continue;  // e.g. a start cell with no reachable neighbour
      }
      suite.episodes.push_back(std::move(spec));
      accepted = true;
    }
    if (!accepted) throw ConfigError("generate_suite: could not draw a feasible episode");
  }
  return suite;
}

std::string suite_to_json(const Suite& suite) {
  json j;
  j["version"] = 1;
  j["name"] = suite.name;
  j["config"] = json::parse(run_config_to_json(suite.config));
  j["episodes"] = json::array();
  for (const auto& e : suite.episodes) {
    j["episodes"].push_back({{"id", e.id},
                             {"seed", e.seed},
                             {"map", e.map_index},
                             {"target_sound", e.target_sound},
                             {"start", {e.start.cell.row, e.start.cell.col}},
                             {"heading", std::string(to_string(e.start.heading))},
                             {"move_prob", e.move_prob},
                             {"dynamic", e.dynamic}});
  }
  return j.dump(2) + "\n";
}

Suite parse_suite(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("version").get<int>() != 1) throw ParseError("unsupported suite version");
    Suite suite;
    suite.name = j.at("name").get<std::string>();
    suite.config = parse_run_config(j.at("config").dump());
    for (const auto& e : j.at("episodes")) {
      EpisodeSpec s;
      s.id = e.at("id").get<std::string>();
      s.seed = e.at("seed").get<std::uint64_t>();
      s.map_index = e.at("map").get<int>();
      s.target_sound = e.at("target_sound").get<std::string>();
      s.start.cell = {e.at("start").at(0).get<int>(), e.at("start").at(1).get<int>()};
      const auto h = heading_from_string(e.at("heading").get<std::string>());
      if (!h) throw ParseError("bad heading in suite");
      s.start.heading = *h;
      s.move_prob = e.at("move_prob").get<double>();
      s.dynamic = e.at("dynamic").get<bool>();
      suite.episodes.push_back(std::move(s));
    }
    std::set<std::uint64_t> seeds;
    for (const auto& e : suite.episodes) {
      if (!seeds.insert(e.seed).second) throw ParseError("duplicate episode seed in suite");
    }
    return suite;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("suite: ") + e.what());
  }
}

Suite load_suite(const std::filesystem::path& path) { return parse_suite(read_file(path)); }

AgentFactory make_agent_factory(const std::string& spec, const Suite& suite, const World& world,
                                std::uint64_t agent_seed, std::chrono::milliseconds timeout) {
  if (spec == "random") {
    return [agent_seed] { return std::make_unique<RandomAgent>(agent_seed); };
  }
  if (spec == "oracle") {
    return [] { return std::make_unique<OracleAgent>(); };
  }
  if (spec == "greedy") {
    const auto params = calibrate_greedy(*world.bank, world.pool(SoundCondition::Heard),
                                         suite.config.acoustics, world.maps.front()->resolution(),
                                         suite.config.downsample);
    return [params] { return std::make_unique<GreedyAgent>(params); };
  }
  if (spec.rfind("exec:", 0) == 0 || spec.rfind("tcp:", 0) == 0) {
    return [spec, timeout] {
      return std::make_unique<RemoteAgent>(open_endpoint(spec, timeout), timeout);
    };
  }
  throw ConfigError("unknown agent '" + spec + "'");
}

std::filesystem::path log_path(const std::filesystem::path& out_dir, const std::string& episode_id) {
  return out_dir / "logs" / (episode_id + ".jsonl");
}

SuiteRun run_suite(const Suite& suite, const World& world, const AgentFactory& factory, int jobs,
                   const std::filesystem::path& out_dir) {
  SuiteRun result;
  result.runs.resize(suite.episodes.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&] {
    try {
      auto agent = factory();
      while (true) {
        const auto i = next.fetch_add(1);
        if (i >= suite.episodes.size()) break;
        const auto& spec = suite.episodes[i];
        auto run = run_episode(make_episode_config(suite, spec, world), *agent);
        if (!out_dir.empty()) {
          write_file_atomic(log_path(out_dir, spec.id),
                            serialize_log({run.log, run.score, run.oracle}));
        }
        result.runs[i] = std::move(run);
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = suite.episodes.size();
    }
  };

  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(suite.episodes.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return result;
}

}  // namespace davnav
