#pragma once

#include <optional>
#include <span>
#include <vector>

#include "davnav/engine.hpp"
#include "davnav/gridmap.hpp"

namespace davnav {

// Earliest catchable point of a realized trajectory tau(0..T): the least t
// with action_distance(start, tau(t)) <= t.
struct InterceptResult {
  bool feasible = false;
  int t_star = -1;
  Cell catch_cell;
  double g_meters = 0.0;
  int g_actions = 0;

  // Among all catchable steps, the one whose cell is geodesically closest
  // to the start (earliest on ties). Exposed for analysis only.
  int closest_t = -1;
  Cell closest_cell;
  double closest_g_meters = 0.0;
};

// Throws Error when the trajectory is empty or touches an occupied cell.
InterceptResult intercept_oracle(const GridMap& map, Pose start, std::span<const Cell> trajectory);

struct EpisodeScore {
  bool success = false;
  double path_m = 0.0;
  int actions = 0;
  double g_static_m = 0.0;
  int g_static_actions = 0;
  double g_dynamic_m = 0.0;
  int g_dynamic_actions = 0;
  double spl = 0.0;
  double sna = 0.0;
  double dspl = 0.0;
  double dsna = 0.0;
};

// S * g / max(p, g). When g is zero every successful run scores 1.
double success_weighted(bool success, double shortest, double taken);

struct StaticGoal {
  double g_meters = 0.0;
  int g_actions = 0;
};

EpisodeScore score_episode(bool success, double path_m, int actions, StaticGoal goal,
                           const InterceptResult& oracle);

// Scores a finished log; the static goal is the target's final cell.
EpisodeScore score_log(const GridMap& map, const EpisodeLog& log, const InterceptResult& oracle);

struct ScoreReport {
  int episodes = 0;
  double sr = 0.0;
  double spl = 0.0;
  double sna = 0.0;
  double dspl = 0.0;
  double dsna = 0.0;
  std::vector<EpisodeScore> per_episode;
};

// Arithmetic means. Throws Error on an empty list.
ScoreReport aggregate(std::span<const EpisodeScore> scores);

}  // namespace davnav
