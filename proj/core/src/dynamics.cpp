#include "davnav/dynamics.hpp"

#include "davnav/geodesic.hpp"

namespace davnav {

namespace {

std::vector<Cell> eligible_cells(const GridMap& map, Cell anchor, Cell skip_a, Cell skip_b) {
  std::vector<Cell> out;
  for (const Cell c : map.free_cells()) {
    if (c != skip_a && c != skip_b && map.connected(c, anchor)) out.push_back(c);
  }
  return out;
}

void draw_goal(Rng& rng, TargetState& state, const GridMap& map) {
  const auto candidates = eligible_cells(map, state.cell, state.excluded, state.cell);
  if (candidates.empty()) {
    state.goal = state.cell;
    state.planned_path = {state.cell};
    return;
  }
  state.goal = candidates[rng.index(candidates.size())];
  // The target has no heading; North orients the first tie-break.
  state.planned_path = shortest_path(map, state.cell, state.goal, Heading::North);
}

}  // namespace

TargetState spawn_target_at(Rng& rng, const GridMap& map, Cell agent_cell, Cell start,
                            double move_prob) {
  if (!(move_prob >= 0.0 && move_prob <= 1.0)) {
    throw ConfigError("move_prob must lie in [0, 1]");
  }
  if (!map.is_free(start) || !map.connected(start, agent_cell)) {
    throw Error("target start must be free and reachable from the agent");
  }
  TargetState state;
  state.cell = start;
  state.excluded = agent_cell;
  state.move_prob = move_prob;
  state.trajectory = {start};
  draw_goal(rng, state, map);
  return state;
}

TargetState spawn_target(Rng& rng, const GridMap& map, Cell agent_cell, double move_prob) {
  if (!map.is_free(agent_cell)) throw Error("spawn_target: agent cell is occupied");
  const auto starts = eligible_cells(map, agent_cell, agent_cell, agent_cell);
  if (starts.empty()) throw Error("spawn_target: fewer than two reachable free cells");
  const Cell start = starts[rng.index(starts.size())];
  return spawn_target_at(rng, map, agent_cell, start, move_prob);
}

void step_target(Rng& rng, TargetState& state, const GridMap& map) {
  const bool advance = rng.bernoulli(state.move_prob);
  if (advance && state.planned_path.size() > 1) {
    state.planned_path.erase(state.planned_path.begin());
    state.cell = state.planned_path.front();
    if (state.cell == state.goal) draw_goal(rng, state, map);
  } else if (state.cell == state.goal && state.planned_path.size() <= 1 && state.move_prob > 0) {
    // Degenerate worlds where the last draw found nothing: retry.
    draw_goal(rng, state, map);
  }
  state.trajectory.push_back(state.cell);
}

}  // namespace davnav
