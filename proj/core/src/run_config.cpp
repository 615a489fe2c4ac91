#include "davnav/run_config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "davnav/episode_log.hpp"

namespace davnav {

using nlohmann::json;

std::string_view to_string(SoundCondition c) {
  return c == SoundCondition::Heard ? "heard" : "unheard";
}

void RunConfig::validate() const {
  if (version != kRunConfigVersion) {
    throw ConfigError("run config version " + std::to_string(version) + " is not supported");
  }
  if (maps.generate ? maps.count <= 0 : maps.paths.empty()) {
    throw ConfigError("run config: no maps");
  }
  if (!sounds.synthesize && sounds.dir.empty()) throw ConfigError("run config: no sound dir");
  if (sounds.sample_rate != 16000 && sounds.sample_rate != 44100) {
    throw ConfigError("run config: sample_rate must be 16000 or 44100");
  }
  if (move_probs.empty()) throw ConfigError("run config: move_probs is empty");
  for (const double p : move_probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("run config: move_prob outside [0, 1]");
  }
  if (!(dynamic_fraction >= 0.0 && dynamic_fraction <= 1.0)) {
    throw ConfigError("run config: dynamic_fraction outside [0, 1]");
  }
  if (step_limit <= 0) throw ConfigError("run config: step_limit must be positive");
  if (episodes <= 0) throw ConfigError("run config: episodes must be positive");
  scenario.validate();
  acoustics.validate();
}

namespace {

// Rejects keys outside `allowed` so typos fail loudly.
void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  try {
    const json j = json::parse(text);
    check_keys(j, "run config",
               {"version", "name", "seed", "maps", "sounds", "scenario", "acoustics", "sensor",
                "downsample", "move_prob", "move_probs", "dynamic_fraction", "mode", "reward",
                "step_limit", "episodes", "split"});
    c.version = j.at("version").get<int>();
    read(j, "name", c.name);
    read(j, "seed", c.seed);
    if (j.contains("maps")) {
      const auto& m = j["maps"];
      check_keys(m, "maps", {"generate", "paths"});
      if (m.contains("paths")) {
        c.maps.generate = false;
        c.maps.paths = m["paths"].get<std::vector<std::string>>();
      }
      if (m.contains("generate")) {
        const auto& g = m["generate"];
        check_keys(g, "maps.generate",
                   {"seed", "count", "width", "height", "rooms", "min_room", "max_room",
                    "resolution"});
        c.maps.generate = true;
        read(g, "seed", c.maps.seed);
        read(g, "count", c.maps.count);
        read(g, "width", c.maps.params.width);
        read(g, "height", c.maps.params.height);
        read(g, "rooms", c.maps.params.rooms);
        read(g, "min_room", c.maps.params.min_room);
        read(g, "max_room", c.maps.params.max_room);
        read(g, "resolution", c.maps.params.resolution);
      }
    }
    if (j.contains("sounds")) {
      const auto& s = j["sounds"];
      check_keys(s, "sounds", {"synth", "dir", "sample_rate"});
      read(s, "sample_rate", c.sounds.sample_rate);
      if (s.contains("dir")) {
        c.sounds.synthesize = false;
        c.sounds.dir = s["dir"].get<std::string>();
      }
      if (s.contains("synth")) {
        const auto& g = s["synth"];
        check_keys(g, "sounds.synth", {"seed", "count", "duration"});
        c.sounds.synthesize = true;
        read(g, "seed", c.sounds.seed);
        read(g, "count", c.sounds.count);
        read(g, "duration", c.sounds.duration_s);
      }
    }
    if (j.contains("scenario")) {
      const auto& s = j["scenario"];
      check_keys(s, "scenario",
                 {"complex", "p_second_sound", "p_distractor_episode", "p_distractor_step",
                  "time_mask_param", "freq_mask_param"});
      read(s, "complex", c.scenario.complex_enabled);
      read(s, "p_second_sound", c.scenario.p_second_sound);
      read(s, "p_distractor_episode", c.scenario.p_distractor_episode);
      read(s, "p_distractor_step", c.scenario.p_distractor_step);
      read(s, "time_mask_param", c.scenario.time_mask_param);
      read(s, "freq_mask_param", c.scenario.freq_mask_param);
    }
    if (j.contains("acoustics")) {
      const auto& a = j["acoustics"];
      check_keys(a, "acoustics",
                 {"reference_gain", "min_distance", "rear_attenuation", "itd_max", "tail"});
      read(a, "reference_gain", c.acoustics.reference_gain);
      read(a, "min_distance", c.acoustics.min_distance);
      read(a, "rear_attenuation", c.acoustics.rear_attenuation);
      read(a, "itd_max", c.acoustics.itd_max);
      if (a.contains("tail")) {
        const auto& t = a["tail"];
        check_keys(t, "acoustics.tail", {"enabled", "gain", "time_constant"});
        read(t, "enabled", c.acoustics.tail.enabled);
        read(t, "gain", c.acoustics.tail.tail_gain);
        read(t, "time_constant", c.acoustics.tail.time_constant_s);
      }
    }
    if (j.contains("sensor")) {
      const auto& s = j["sensor"];
      check_keys(s, "sensor", {"rays", "fov_deg", "max_range_m"});
      read(s, "rays", c.sensor.ray_count);
      read(s, "fov_deg", c.sensor.fov_deg);
      read(s, "max_range_m", c.sensor.max_range_m);
    }
    if (j.contains("downsample")) {
      const auto d = j["downsample"].get<std::string>();
      if (d == "stride") c.downsample = Downsample::Stride;
      else if (d == "average") c.downsample = Downsample::Average;
      else throw ConfigError("downsample must be stride or average");
    }
    if (j.contains("move_prob")) c.move_probs = {j["move_prob"].get<double>()};
    if (j.contains("move_probs")) c.move_probs = j["move_probs"].get<std::vector<double>>();
    read(j, "dynamic_fraction", c.dynamic_fraction);
    if (j.contains("mode")) {
      const auto m = action_mode_from_string(j["mode"].get<std::string>());
      if (!m) throw ConfigError("mode must be raw or waypoint");
      c.mode = *m;
    }
    if (j.contains("reward")) {
      const auto r = reward_mode_from_string(j["reward"].get<std::string>());
      if (!r) throw ConfigError("reward must be current or intersection");
      c.reward_mode = *r;
    }
    read(j, "step_limit", c.step_limit);
    read(j, "episodes", c.episodes);
    if (j.contains("split")) {
      const auto s = j["split"].get<std::string>();
      if (s == "heard") c.split = SoundCondition::Heard;
      else if (s == "unheard") c.split = SoundCondition::Unheard;
      else throw ConfigError("split must be heard or unheard");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_file(path), path.parent_path());
}

std::string run_config_to_json(const RunConfig& c) {
  json j;
  j["version"] = c.version;
  j["name"] = c.name;
  j["seed"] = c.seed;
  if (c.maps.generate) {
    const auto& p = c.maps.params;
    j["maps"]["generate"] = {{"seed", c.maps.seed},       {"count", c.maps.count},
                             {"width", p.width},          {"height", p.height},
                             {"rooms", p.rooms},          {"min_room", p.min_room},
                             {"max_room", p.max_room},    {"resolution", p.resolution}};
  } else {
    j["maps"]["paths"] = c.maps.paths;
  }
  j["sounds"]["sample_rate"] = c.sounds.sample_rate;
  if (c.sounds.synthesize) {
    j["sounds"]["synth"] = {{"seed", c.sounds.seed}, {"count", c.sounds.count},
                            {"duration", c.sounds.duration_s}};
  } else {
    j["sounds"]["dir"] = c.sounds.dir;
  }
  j["scenario"] = {{"complex", c.scenario.complex_enabled},
                   {"p_second_sound", c.scenario.p_second_sound},
                   {"p_distractor_episode", c.scenario.p_distractor_episode},
                   {"p_distractor_step", c.scenario.p_distractor_step},
                   {"time_mask_param", c.scenario.time_mask_param},
                   {"freq_mask_param", c.scenario.freq_mask_param}};
  j["acoustics"] = {{"reference_gain", c.acoustics.reference_gain},
                    {"min_distance", c.acoustics.min_distance},
                    {"rear_attenuation", c.acoustics.rear_attenuation},
                    {"itd_max", c.acoustics.itd_max},
                    {"tail",
                     {{"enabled", c.acoustics.tail.enabled},
                      {"gain", c.acoustics.tail.tail_gain},
                      {"time_constant", c.acoustics.tail.time_constant_s}}}};
  j["sensor"] = {{"rays", c.sensor.ray_count}, {"fov_deg", c.sensor.fov_deg},
                 {"max_range_m", c.sensor.max_range_m}};
  j["downsample"] = c.downsample == Downsample::Stride ? "stride" : "average";
  j["move_probs"] = c.move_probs;
  j["dynamic_fraction"] = c.dynamic_fraction;
  j["mode"] = std::string(to_string(c.mode));
  j["reward"] = std::string(to_string(c.reward_mode));
  j["step_limit"] = c.step_limit;
  j["episodes"] = c.episodes;
  j["split"] = std::string(to_string(c.split));
  return j.dump(2);
}

}  // namespace davnav
