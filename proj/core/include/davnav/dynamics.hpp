#pragma once

#include <vector>

#include "davnav/gridmap.hpp"
#include "davnav/rng.hpp"

namespace davnav {

// The moving source. It has no heading and no body; it may share the
// agent's cell.
struct TargetState {
  Cell cell;
  Cell goal;
  std::vector<Cell> planned_path;  // front() == cell, back() == goal
  std::vector<Cell> trajectory;    // trajectory[k]: cell after k steps
  double move_prob = 0.3;
  Cell excluded;                   // never drawn as a goal

  int steps() const { return static_cast<int>(trajectory.size()) - 1; }
};

// Start uniform over cells reachable from `agent_cell` except that cell;
// goal uniform over the same set minus the start. `agent_cell` stays
// excluded from every later goal draw. When no goal remains (a
// two-cell world) the target holds its start cell.
// Throws Error with fewer than two reachable free cells.
TargetState spawn_target(Rng& rng, const GridMap& map, Cell agent_cell, double move_prob);

// Same as spawn_target but with a fixed start cell.
TargetState spawn_target_at(Rng& rng, const GridMap& map, Cell agent_cell, Cell start,
                            double move_prob);

// One Bernoulli(move_prob) draw per call: on success advance one cell along
// the plan. Reaching the goal draws a fresh goal and replans immediately.
void step_target(Rng& rng, TargetState& state, const GridMap& map);

}  // namespace davnav
