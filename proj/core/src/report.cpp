#include "davnav/report.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace davnav {

std::vector<std::string> condition_labels() {
  std::vector<std::string> labels;
  for (const auto sound : {SoundCondition::Heard, SoundCondition::Unheard}) {
    for (const bool complex : {false, true}) {
      for (const bool dynamic : {false, true}) {
        labels.push_back(ConditionTag{sound, complex, dynamic}.label());
      }
    }
  }
  return labels;
}

std::map<std::string, ScoreReport> aggregate_by_condition(const std::vector<ScoredEpisode>& episodes) {
  std::map<std::string, std::vector<EpisodeScore>> groups;
  for (const auto& e : episodes) groups[e.condition.label()].push_back(e.score);
  std::map<std::string, ScoreReport> out;
  for (const auto& [label, scores] : groups) out[label] = aggregate(scores);
  return out;
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string results_table(const std::vector<ScoredEpisode>& episodes) {
  const auto groups = aggregate_by_condition(episodes);
  auto columns = condition_labels();
  columns.push_back("all");
  std::vector<std::optional<ScoreReport>> reports;
  for (const auto& c : columns) {
    if (c == "all") {
      std::vector<EpisodeScore> all;
      for (const auto& e : episodes) all.push_back(e.score);
      reports.push_back(all.empty() ? std::nullopt : std::optional(aggregate(all)));
    } else {
      const auto it = groups.find(c);
      reports.push_back(it == groups.end() ? std::nullopt : std::optional(it->second));
    }
  }

  std::string out = "metric";
  for (const auto& c : columns) out += "\t" + c;
  out += "\n";
  const std::pair<const char*, double ScoreReport::*> metrics[] = {
      {"SR", &ScoreReport::sr},     {"SPL", &ScoreReport::spl},   {"SNA", &ScoreReport::sna},
      {"DSPL", &ScoreReport::dspl}, {"DSNA", &ScoreReport::dsna},
  };
  out += "episodes";
  for (const auto& r : reports) out += "\t" + (r ? std::to_string(r->episodes) : std::string("0"));
  out += "\n";
  for (const auto& [name, member] : metrics) {
    out += name;
    for (const auto& r : reports) out += "\t" + (r ? fixed3((*r).*member) : std::string("-"));
    out += "\n";
  }
  return out;
}

std::string results_json(const std::string& suite_name, const std::string& agent,
                         const std::vector<ScoredEpisode>& episodes) {
  using nlohmann::json;
  auto report_json = [](const ScoreReport& r) {
    return json{{"episodes", r.episodes}, {"SR", r.sr},     {"SPL", r.spl},
                {"SNA", r.sna},           {"DSPL", r.dspl}, {"DSNA", r.dsna}};
  };
  json j;
  j["suite"] = suite_name;
  j["agent"] = agent;
  j["conditions"] = json::object();
  for (const auto& [label, r] : aggregate_by_condition(episodes)) j["conditions"][label] = report_json(r);
  std::vector<EpisodeScore> all;
  for (const auto& e : episodes) all.push_back(e.score);
  if (!all.empty()) j["all"] = report_json(aggregate(all));
  j["episodes"] = json::array();
  for (const auto& e : episodes) {
    j["episodes"].push_back({{"id", e.episode_id},
                             {"condition", e.condition.label()},
                             {"success", e.score.success},
                             {"spl", e.score.spl},
                             {"sna", e.score.sna},
                             {"dspl", e.score.dspl},
                             {"dsna", e.score.dsna}});
  }
  return j.dump(2) + "\n";
}

}  // namespace davnav
