#include "davnav/episode_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace davnav {

using nlohmann::json;

namespace {

json cell_json(Cell c) { return json::array({c.row, c.col}); }

Cell cell_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json pose_json(Pose p) {
  return {{"cell", cell_json(p.cell)}, {"heading", std::string(to_string(p.heading))}};
}

Pose pose_from(const json& j) {
  const auto h = heading_from_string(j.at("heading").get<std::string>());
  if (!h) throw ParseError("bad heading");
  return {cell_from(j.at("cell")), *h};
}

json audio_json(const StepAudioEvents& e) {
  json j{{"distractor", e.distractor_active},
         {"augmentation", std::string(to_string(e.augmentation))}};
  if (e.distractor_id) j["distractor_id"] = *e.distractor_id;
  if (e.distractor_cell) j["distractor_cell"] = cell_json(*e.distractor_cell);
  return j;
}

StepAudioEvents audio_from(const json& j) {
  StepAudioEvents e;
  e.distractor_active = j.at("distractor").get<bool>();
  const auto aug = augmentation_from_string(j.at("augmentation").get<std::string>());
  if (!aug) throw ParseError("bad augmentation");
  e.augmentation = *aug;
  if (j.contains("distractor_id")) e.distractor_id = j["distractor_id"].get<std::string>();
  if (j.contains("distractor_cell")) e.distractor_cell = cell_from(j["distractor_cell"]);
  return e;
}

json score_json(const EpisodeScore& s) {
  return {{"success", s.success},         {"path_m", s.path_m},
          {"actions", s.actions},         {"g_static_m", s.g_static_m},
          {"g_static_actions", s.g_static_actions}, {"g_dynamic_m", s.g_dynamic_m},
          {"g_dynamic_actions", s.g_dynamic_actions}, {"spl", s.spl},
          {"sna", s.sna},                 {"dspl", s.dspl},
          {"dsna", s.dsna}};
}

EpisodeScore score_from(const json& j) {
  EpisodeScore s;
  s.success = j.at("success").get<bool>();
  s.path_m = j.at("path_m").get<double>();
  s.actions = j.at("actions").get<int>();
  s.g_static_m = j.at("g_static_m").get<double>();
  s.g_static_actions = j.at("g_static_actions").get<int>();
  s.g_dynamic_m = j.at("g_dynamic_m").get<double>();
  s.g_dynamic_actions = j.at("g_dynamic_actions").get<int>();
  s.spl = j.at("spl").get<double>();
  s.sna = j.at("sna").get<double>();
  s.dspl = j.at("dspl").get<double>();
  s.dsna = j.at("dsna").get<double>();
  return s;
}

json oracle_json(const InterceptResult& r) {
  return {{"feasible", r.feasible},       {"t_star", r.t_star},
          {"catch_cell", cell_json(r.catch_cell)}, {"g_meters", r.g_meters},
          {"g_actions", r.g_actions},     {"closest_t", r.closest_t},
          {"closest_cell", cell_json(r.closest_cell)}, {"closest_g_meters", r.closest_g_meters}};
}

InterceptResult oracle_from(const json& j) {
  InterceptResult r;
  r.feasible = j.at("feasible").get<bool>();
  r.t_star = j.at("t_star").get<int>();
  r.catch_cell = cell_from(j.at("catch_cell"));
  r.g_meters = j.at("g_meters").get<double>();
  r.g_actions = j.at("g_actions").get<int>();
  r.closest_t = j.at("closest_t").get<int>();
  r.closest_cell = cell_from(j.at("closest_cell"));
  r.closest_g_meters = j.at("closest_g_meters").get<double>();
  return r;
}

template <typename T>
T enum_field(const json& j, const char* key, std::optional<T> (*parse)(std::string_view)) {
  const auto v = parse(j.at(key).get<std::string>());
  if (!v) throw ParseError(std::string("bad value for ") + key);
  return *v;
}

}  // namespace

std::string checksum_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string serialize_log(const LoggedEpisode& episode) {
  const auto& log = episode.log;
  std::string out;
  json header{{"type", "header"},
              {"version", 1},
              {"episode_id", log.episode_id},
              {"seed", log.seed},
              {"map", log.map_name},
              {"target_sound", log.target_sound},
              {"start", pose_json(log.start)},
              {"target_start", cell_json(log.target_start)},
              {"move_prob", log.move_prob},
              {"mode", std::string(to_string(log.mode))},
              {"reward_mode", std::string(to_string(log.reward_mode))},
              {"step_limit", log.step_limit},
              {"complex", log.complex_audio},
              {"distractor_enabled", log.plan.distractor_enabled},
              {"initial_audio", audio_json(log.initial_audio)}};
  if (log.plan.second_sound_id) header["second_sound"] = *log.plan.second_sound_id;
  out += header.dump() + '\n';

  for (const auto& r : log.records) {
    json j{{"type", "step"},
           {"step", r.step},
           {"decision", r.decision},
           {"action", r.action},
           {"pose", pose_json(r.pose)},
           {"target", cell_json(r.target)},
           {"reward", r.reward},
           {"collided", r.collided},
           {"audio", audio_json(r.audio)}};
    if (r.waypoint) j["waypoint"] = *r.waypoint;
    out += j.dump() + '\n';
  }

  json end{{"type", "end"},
           {"outcome", std::string(to_string(log.outcome))},
           {"path_length_m", log.path_length_m},
           {"action_count", log.action_count},
           {"total_reward", log.total_reward}};
  if (episode.score) end["score"] = score_json(*episode.score);
  if (episode.oracle) end["oracle"] = oracle_json(*episode.oracle);
  end["checksum"] = checksum_hex(out);
  out += end.dump() + '\n';
  return out;
}

LoggedEpisode parse_log(std::string_view text) {
  LoggedEpisode episode;
  auto& log = episode.log;
  std::size_t pos = 0;
  bool have_header = false, have_end = false;
  int line_no = 0;
  try {
    while (pos < text.size()) {
      const auto eol = text.find('\n', pos);
      if (eol == std::string_view::npos) throw ParseError("unterminated line");
      const auto line = text.substr(pos, eol - pos);
      ++line_no;
      if (have_end) throw ParseError("data after end record");
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        if (have_header) throw ParseError("duplicate header");
        have_header = true;
        log.episode_id = j.at("episode_id").get<std::string>();
        log.seed = j.at("seed").get<std::uint64_t>();
        log.map_name = j.at("map").get<std::string>();
        log.target_sound = j.at("target_sound").get<std::string>();
        log.start = pose_from(j.at("start"));
        log.target_start = cell_from(j.at("target_start"));
        log.move_prob = j.at("move_prob").get<double>();
        log.mode = enum_field<ActionMode>(j, "mode", action_mode_from_string);
        log.reward_mode = enum_field<RewardMode>(j, "reward_mode", reward_mode_from_string);
        log.step_limit = j.at("step_limit").get<int>();
        log.complex_audio = j.at("complex").get<bool>();
        log.plan.distractor_enabled = j.at("distractor_enabled").get<bool>();
        if (j.contains("second_sound")) log.plan.second_sound_id = j["second_sound"].get<std::string>();
        log.initial_audio = audio_from(j.at("initial_audio"));
      } else if (type == "step") {
        if (!have_header) throw ParseError("step before header");
        StepRecord r;
        r.step = j.at("step").get<int>();
        r.decision = j.at("decision").get<int>();
        r.action = j.at("action").get<std::string>();
        if (j.contains("waypoint")) r.waypoint = j["waypoint"].get<int>();
        r.pose = pose_from(j.at("pose"));
        r.target = cell_from(j.at("target"));
        r.reward = j.at("reward").get<double>();
        r.collided = j.at("collided").get<bool>();
        r.audio = audio_from(j.at("audio"));
        log.records.push_back(std::move(r));
      } else if (type == "end") {
        if (!have_header) throw ParseError("end before header");
        const auto expected = checksum_hex(text.substr(0, pos));
        if (j.at("checksum").get<std::string>() != expected) throw ParseError("checksum mismatch");
        log.outcome = enum_field<Outcome>(j, "outcome", outcome_from_string);
        log.path_length_m = j.at("path_length_m").get<double>();
        log.action_count = j.at("action_count").get<int>();
        log.total_reward = j.at("total_reward").get<double>();
        if (j.contains("score")) episode.score = score_from(j["score"]);
        if (j.contains("oracle")) episode.oracle = oracle_from(j["oracle"]);
        have_end = true;
      } else {
        throw ParseError("unknown record type '" + type + "'");
      }
      pos = eol + 1;
    }
  } catch (const json::exception& e) {
    throw ParseError("log line " + std::to_string(line_no) + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError("log line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_end) throw ParseError("log has no end record");
  return episode;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoggedEpisode load_log(const std::filesystem::path& path) { return parse_log(read_file(path)); }

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace davnav
