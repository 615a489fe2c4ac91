#pragma once

#include <map>
#include <string>
#include <vector>

#include "davnav/metrics.hpp"
#include "davnav/suite.hpp"

namespace davnav {

struct ScoredEpisode {
  std::string episode_id;
  ConditionTag condition;
  EpisodeScore score;
};

// Aggregates keyed by condition label, in the fixed table column order
// heard/unheard x clean/complex x static/dynamic. Conditions without
// episodes are absent.
std::map<std::string, ScoreReport> aggregate_by_condition(const std::vector<ScoredEpisode>& episodes);

// Every condition label in table order.
std::vector<std::string> condition_labels();

// Tab-separated table: one row per metric (episodes, SR, SPL, SNA, DSPL,
// DSNA), one column per condition plus "all". Empty cells print "-".
std::string results_table(const std::vector<ScoredEpisode>& episodes);

// Machine-readable aggregate record (JSON).
std::string results_json(const std::string& suite_name, const std::string& agent,
                         const std::vector<ScoredEpisode>& episodes);

}  // namespace davnav
