#include "davnav/metrics.hpp"

#include <algorithm>

#include "davnav/geodesic.hpp"

namespace davnav {

InterceptResult intercept_oracle(const GridMap& map, Pose start, std::span<const Cell> trajectory) {
  if (trajectory.empty()) throw Error("intercept_oracle: empty trajectory");
  for (const Cell c : trajectory) {
    if (!map.is_free(c)) throw Error("intercept_oracle: trajectory touches an occupied cell");
  }
  const auto reach = action_field(map, start);
  const auto geo = geodesic_field(map, start.cell);

  InterceptResult result;
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const Cell c = trajectory[t];
    const auto a = reach.to_cell(c);
    if (!a || *a > static_cast<int>(t)) continue;
    const double g = *geo.meters(c);
    if (!result.feasible) {
      result.feasible = true;
      result.t_star = static_cast<int>(t);
      result.catch_cell = c;
      result.g_meters = g;
      result.g_actions = *a;
      result.closest_t = result.t_star;
      result.closest_cell = c;
      result.closest_g_meters = g;
    } else if (g < result.closest_g_meters) {
      result.closest_t = static_cast<int>(t);
      result.closest_cell = c;
      result.closest_g_meters = g;
    }
  }
  return result;
}

double success_weighted(bool success, double shortest, double taken) {
  if (!success) return 0.0;
  // A zero-length optimum (the target walked onto the start cell) cannot be
  // beaten, so any successful run scores full marks.
  if (!(shortest > 0.0)) return 1.0;
  return shortest / std::max(shortest, taken);
}

EpisodeScore score_episode(bool success, double path_m, int actions, StaticGoal goal,
                           const InterceptResult& oracle) {
  EpisodeScore s;
  s.success = success;
  s.path_m = path_m;
  s.actions = actions;
  s.g_static_m = goal.g_meters;
  s.g_static_actions = goal.g_actions;
  s.g_dynamic_m = oracle.g_meters;
  s.g_dynamic_actions = oracle.g_actions;
  s.spl = success_weighted(success, goal.g_meters, path_m);
  s.sna = success_weighted(success, goal.g_actions, actions);
  s.dspl = success_weighted(success, oracle.g_meters, path_m);
  s.dsna = success_weighted(success, oracle.g_actions, actions);
  return s;
}

EpisodeScore score_log(const GridMap& map, const EpisodeLog& log, const InterceptResult& oracle) {
  const Cell final_target = log.records.empty() ? log.target_start : log.records.back().target;
  const auto geo = geodesic_field(map, log.start.cell);
  const auto g_m = geo.meters(final_target);
  const auto g_a = action_distance(map, log.start, final_target);
  if (!g_m || !g_a) throw Error("score_log: target unreachable from the start pose");
  return score_episode(log.outcome == Outcome::Success, log.path_length_m, log.action_count,
                       {*g_m, *g_a}, oracle);
}

ScoreReport aggregate(std::span<const EpisodeScore> scores) {
  if (scores.empty()) throw Error("aggregate: no episodes");
  ScoreReport r;
  r.episodes = static_cast<int>(scores.size());
  for (const auto& s : scores) {
    r.sr += s.success ? 1.0 : 0.0;
    r.spl += s.spl;
    r.sna += s.sna;
    r.dspl += s.dspl;
    r.dsna += s.dsna;
  }
  const double n = static_cast<double>(scores.size());
  r.sr /= n;
  r.spl /= n;
  r.sna /= n;
  r.dspl /= n;
  r.dsna /= n;
  r.per_episode.assign(scores.begin(), scores.end());
  return r;
}

}  // namespace davnav
