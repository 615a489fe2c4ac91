#include "davnav/protocol.hpp"

#include <nlohmann/json.hpp>

namespace davnav {

using nlohmann::json;

namespace {

json envelope(std::string_view kind) {
  return {{"kind", std::string(kind)}, {"protocol_version", kProtocolVersion}};
}

json parse_json(std::string_view line) {
  try {
    auto j = json::parse(line);
    if (!j.is_object()) throw ProtocolError("message is not an object");
    return j;
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed message: ") + e.what());
  }
}

json observation_json(const Observation& obs) {
  const auto& s = obs.spectrogram;
  json j{{"step_index", obs.step_index},
         {"collided", obs.collided},
         {"spectrogram",
          {{"dims", {s.freq_bins, s.time_frames, Spectrogram::kChannels}},
           {"sample_rate", s.sample_rate},
           {"dtype", "float32le"},
           {"data", encode_tensor(s.values)}}},
         {"scan", {{"angles", obs.scan.angles}, {"ranges", obs.scan.ranges},
                   {"fov_deg", obs.scan.fov_deg}, {"max_range_m", obs.scan.max_range_m}}}};
  return j;
}

Observation observation_from(const json& j) {
  Observation obs;
  obs.step_index = j.at("step_index").get<int>();
  obs.collided = j.at("collided").get<bool>();
  const auto& s = j.at("spectrogram");
  const auto dims = s.at("dims").get<std::vector<int>>();
  if (dims.size() != 3 || dims[2] != Spectrogram::kChannels || dims[0] <= 0 || dims[1] <= 0) {
    throw ProtocolError("bad spectrogram dims");
  }
  obs.spectrogram.freq_bins = dims[0];
  obs.spectrogram.time_frames = dims[1];
  obs.spectrogram.sample_rate = s.at("sample_rate").get<int>();
  obs.spectrogram.values = decode_tensor(
      s.at("data").get<std::string>(),
      static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) * 2);
  const auto& scan = j.at("scan");
  obs.scan.angles = scan.at("angles").get<std::vector<double>>();
  obs.scan.ranges = scan.at("ranges").get<std::vector<double>>();
  obs.scan.fov_deg = scan.at("fov_deg").get<double>();
  obs.scan.max_range_m = scan.at("max_range_m").get<double>();
  obs.scan.ray_count = static_cast<int>(obs.scan.ranges.size());
  obs.scan.hit_cells.assign(obs.scan.ranges.size(), std::nullopt);
  return obs;
}

}  // namespace

std::string hello_message(std::string_view agent_name) {
  auto j = envelope("hello");
  j["agent_name"] = std::string(agent_name);
  return j.dump();
}

std::string episode_start_message(const EpisodeInfo& info) {
  auto j = envelope("episode_start");
  j["episode_id"] = info.episode_id;
  j["seed"] = info.seed;
  j["mode"] = std::string(to_string(info.mode));
  j["step_limit"] = info.step_limit;
  j["sample_rate"] = info.sample_rate;
  j["spectrogram_dims"] = {info.freq_bins, info.time_frames, Spectrogram::kChannels};
  j["scan_dims"] = {info.ray_count};
  j["fov_deg"] = info.fov_deg;
  j["max_range_m"] = info.max_range_m;
  j["map"] = {{"width", info.map_width}, {"height", info.map_height},
              {"resolution", info.resolution}};
  return j.dump();
}

std::string observation_message(const Observation& obs, const Feedback& feedback) {
  auto j = envelope("observation");
  j.update(observation_json(obs));
  j["reward"] = feedback.reward;
  j["invalid_waypoint"] = feedback.invalid_waypoint;
  j["intermediate"] = json::array();
  for (const auto& o : feedback.intermediate) j["intermediate"].push_back(observation_json(o));
  return j.dump();
}

std::string action_message(const Action& action) {
  auto j = envelope("action");
  if (action.is_waypoint) {
    j["waypoint"] = action.waypoint;
  } else {
    j["raw"] = std::string(to_string(action.raw));
  }
  return j.dump();
}

std::string episode_end_message(std::string_view episode_id, Outcome outcome,
                                const EpisodeScore* score) {
  auto j = envelope("episode_end");
  j["episode_id"] = std::string(episode_id);
  j["outcome"] = std::string(to_string(outcome));
  if (score) {
    j["scores"] = {{"success", score->success}, {"spl", score->spl}, {"sna", score->sna},
                   {"dspl", score->dspl},       {"dsna", score->dsna}};
  }
  return j.dump();
}

std::string shutdown_message() { return envelope("shutdown").dump(); }

std::string error_message(std::string_view text) {
  auto j = envelope("error");
  j["message"] = std::string(text);
  return j.dump();
}

Message parse_message(std::string_view line) {
  const auto j = parse_json(line);
  return guarded([&] {
    const auto version = j.at("protocol_version").get<int>();
    if (version != kProtocolVersion) {
      throw ProtocolError("protocol_version mismatch: got " + std::to_string(version));
    }
    return Message{j.at("kind").get<std::string>(), std::string(line)};
  });
}

std::string parse_hello(std::string_view line) {
  const auto j = parse_json(line);
  return guarded([&] {
    if (j.contains("agent_name")) return j["agent_name"].get<std::string>();
    return j.value("server", std::string("harness"));
  });
}

EpisodeInfo parse_episode_start(std::string_view line) {
  const auto j = parse_json(line);
  return guarded([&] {
    EpisodeInfo info;
    info.episode_id = j.at("episode_id").get<std::string>();
    info.seed = j.at("seed").get<std::uint64_t>();
    const auto mode = action_mode_from_string(j.at("mode").get<std::string>());
    if (!mode) throw ProtocolError("unknown mode");
    info.mode = *mode;
    info.step_limit = j.at("step_limit").get<int>();
    info.sample_rate = j.at("sample_rate").get<int>();
    const auto dims = j.at("spectrogram_dims").get<std::vector<int>>();
    if (dims.size() != 3) throw ProtocolError("bad spectrogram dims");
    info.freq_bins = dims[0];
    info.time_frames = dims[1];
    info.ray_count = j.at("scan_dims").at(0).get<int>();
    info.fov_deg = j.at("fov_deg").get<double>();
    info.max_range_m = j.at("max_range_m").get<double>();
    info.map_width = j.at("map").at("width").get<int>();
    info.map_height = j.at("map").at("height").get<int>();
    info.resolution = j.at("map").at("resolution").get<double>();
    return info;
  });
}

std::pair<Observation, Feedback> parse_observation(std::string_view line) {
  const auto j = parse_json(line);
  return guarded([&] {
    Feedback fb;
    fb.reward = j.at("reward").get<double>();
    fb.invalid_waypoint = j.at("invalid_waypoint").get<bool>();
    for (const auto& o : j.at("intermediate")) fb.intermediate.push_back(observation_from(o));
    return std::pair{observation_from(j), std::move(fb)};
  });
}

Action parse_action(std::string_view line) {
  const auto j = parse_json(line);
  return guarded([&] {
    if (j.value("kind", std::string()) != "action") throw ProtocolError("expected an action");
    if (j.contains("waypoint")) {
      if (!j["waypoint"].is_number_integer()) throw ProtocolError("waypoint must be an integer");
      const int index = j["waypoint"].get<int>();
      if (index < 0 || index > 8) throw ProtocolError("index out of range");
      return Action::at_waypoint(index);
    }
    const auto raw = raw_action_from_string(j.at("raw").get<std::string>());
    if (!raw) throw ProtocolError("unknown raw action");
    return Action::of(*raw);
  });
}

Outcome parse_episode_end(std::string_view line) {
  const auto j = parse_json(line);
  return guarded([&] {
    const auto o = outcome_from_string(j.at("outcome").get<std::string>());
    if (!o) throw ProtocolError("unknown outcome");
    return *o;
  });
}

RemoteAgent::RemoteAgent(std::unique_ptr<LineChannel> channel, std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), timeout_(timeout) {
  const auto line = await("hello");
  name_ = parse_hello(line);
  auto reply = envelope("hello");
  reply["server"] = "davnav";
  channel_->send(reply.dump());
}

RemoteAgent::~RemoteAgent() {
  if (closed_) return;
  try {
    channel_->send(shutdown_message());
  } catch (const Error&) {
  }
}

std::string RemoteAgent::await(std::string_view expected_kind) {
  const auto line = channel_->receive(timeout_);
  if (!line) throw ProtocolError("timeout waiting for " + std::string(expected_kind));
  Message msg;
  try {
    msg = parse_message(*line);
  } catch (const ProtocolError& e) {
    channel_->send(error_message(e.what()));
    throw;
  }
  if (msg.kind == "error") throw ProtocolError("agent reported an error: " + *line);
  if (msg.kind != expected_kind) {
    const std::string text = "expected " + std::string(expected_kind) + ", got " + msg.kind;
    channel_->send(error_message(text));
    throw ProtocolError(text);
  }
  return msg.body;
}

void RemoteAgent::begin_episode(const EpisodeInfo& info, const EpisodeConfig*) {
  episode_id_ = info.episode_id;
  channel_->send(episode_start_message(info));
}

Action RemoteAgent::act(const Observation& obs, const Feedback& feedback) {
  channel_->send(observation_message(obs, feedback));
  const auto line = await("action");
  try {
    return parse_action(line);
  } catch (const ProtocolError& e) {
    channel_->send(error_message(e.what()));
    throw;
  }
}

void RemoteAgent::end_episode(Outcome outcome, const EpisodeScore* score) {
  channel_->send(episode_end_message(episode_id_, outcome, score));
}

int run_agent_client(LineChannel& channel, Agent& agent, std::chrono::milliseconds timeout) {
  channel.send(hello_message(agent.name()));
  int episodes = 0;
  bool greeted = false;
  while (true) {
    std::optional<std::string> line;
    try {
      line = channel.receive(timeout);
    } catch (const ProtocolError&) {
      return episodes;  // harness closed the session
    }
    if (!line) throw ProtocolError("timeout waiting for the harness");
    const auto msg = parse_message(*line);
    if (msg.kind == "hello") {
      greeted = true;
    } else if (!greeted) {
      throw ProtocolError("expected hello from the harness");
    } else if (msg.kind == "episode_start") {
      agent.begin_episode(parse_episode_start(msg.body), nullptr);
    } else if (msg.kind == "observation") {
      const auto [obs, feedback] = parse_observation(msg.body);
      channel.send(action_message(agent.act(obs, feedback)));
    } else if (msg.kind == "episode_end") {
      agent.end_episode(parse_episode_end(msg.body), nullptr);
      ++episodes;
    } else if (msg.kind == "shutdown") {
      return episodes;
    } else if (msg.kind == "error") {
      continue;
    } else {
      throw ProtocolError("unexpected message kind " + msg.kind);
    }
  }
}

}  // namespace davnav
