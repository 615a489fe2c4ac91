#include "davnav/geodesic.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <queue>

namespace davnav {

GeodesicField geodesic_field(const GridMap& map, Cell source) {
  if (!map.is_free(source)) throw Error("geodesic_field: source cell is occupied");
  std::vector<std::int32_t> hops(map.cell_count(), GeodesicField::kUnreachable);
  std::queue<Cell> frontier;
  hops[map.index(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Cell cur = frontier.front();
    frontier.pop();
    const auto next_hops = hops[map.index(cur)] + 1;
    for (int h = 0; h < 4; ++h) {
      const Cell next = neighbor(cur, static_cast<Heading>(h));
      if (map.is_free(next) && hops[map.index(next)] == GeodesicField::kUnreachable) {
        hops[map.index(next)] = next_hops;
        frontier.push(next);
      }
    }
  }
  return GeodesicField(source, map.width(), map.resolution(), std::move(hops));
}

std::vector<Cell> shortest_path(const GridMap& map, const GeodesicField& to_field, Cell from,
                                Heading initial) {
  if (!map.is_free(from) || !to_field.reachable(from)) return {};
  std::vector<Cell> path{from};
  Cell cur = from;
  Heading facing = initial;
  while (to_field.raw(cur) > 0) {
    const auto want = to_field.raw(cur) - 1;
    const std::array<Heading, 4> order{facing, turn_left(facing), turn_right(facing),
                                       opposite(facing)};
    bool advanced = false;
    for (const Heading h : order) {
      const Cell next = neighbor(cur, h);
      if (map.is_free(next) && to_field.raw(next) == want) {
        cur = next;
        facing = h;
        advanced = true;
        break;
      }
    }
    if (!advanced) return {};
    path.push_back(cur);
  }
  return path;
}

std::vector<Cell> shortest_path(const GridMap& map, Cell from, Cell to, Heading initial) {
  return shortest_path(map, geodesic_field(map, to), from, initial);
}

namespace {

using ForwardFilter = std::function<bool(Cell from, Cell to)>;

std::size_t pose_index(const GridMap& map, Cell c, Heading h) {
  return map.index(c) * 4 + static_cast<std::size_t>(h);
}

// Unit-cost BFS over (cell, heading). Forward edges must pass `allow`.
std::vector<std::int32_t> pose_bfs(const GridMap& map, Pose start, const ForwardFilter& allow) {
  std::vector<std::int32_t> cost(map.cell_count() * 4, ActionField::kUnreachable);
  if (!map.is_free(start.cell)) throw Error("action search: start cell is occupied");
  std::queue<Pose> frontier;
  cost[pose_index(map, start.cell, start.heading)] = 0;
  frontier.push(start);
  while (!frontier.empty()) {
    const Pose cur = frontier.front();
    frontier.pop();
    const auto next_cost = cost[pose_index(map, cur.cell, cur.heading)] + 1;
    const Cell ahead = neighbor(cur.cell, cur.heading);
    const std::array<std::optional<Pose>, 3> successors{
        (map.is_free(ahead) && (!allow || allow(cur.cell, ahead)))
            ? std::optional<Pose>(Pose{ahead, cur.heading})
            : std::nullopt,
        Pose{cur.cell, turn_left(cur.heading)},
        Pose{cur.cell, turn_right(cur.heading)},
    };
    for (const auto& next : successors) {
      if (!next) continue;
      auto& slot = cost[pose_index(map, next->cell, next->heading)];
      if (slot == ActionField::kUnreachable) {
        slot = next_cost;
        frontier.push(*next);
      }
    }
  }
  return cost;
}

// Walks predecessors from the cheapest goal pose back to the start. Only
// free cells ever carry a finite cost, so dimensions suffice.
// Predecessor preference: Forward, then RotateLeft, then RotateRight.
std::vector<Move> backtrack(int width, int height, const std::vector<std::int32_t>& cost,
                            Cell goal, const ForwardFilter& allow) {
  auto at = [&](Cell c, Heading h) -> std::int32_t {
    if (c.row < 0 || c.col < 0 || c.row >= height || c.col >= width) {
      return ActionField::kUnreachable;
    }
    return cost[(static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(c.col)) * 4 + static_cast<std::size_t>(h)];
  };
  std::optional<Heading> best;
  std::int32_t best_cost = ActionField::kUnreachable;
  for (int h = 0; h < 4; ++h) {
    const auto c = at(goal, static_cast<Heading>(h));
    if (c != ActionField::kUnreachable && (!best || c < best_cost)) {
      best = static_cast<Heading>(h);
      best_cost = c;
    }
  }
  if (!best) return {};

  std::vector<Move> moves;
  Pose cur{goal, *best};
  std::int32_t k = best_cost;
  while (k > 0) {
    const auto want = k - 1;
    const Cell behind = neighbor(cur.cell, opposite(cur.heading));
    if (at(behind, cur.heading) == want && (!allow || allow(behind, cur.cell))) {
      moves.push_back(Move::Forward);
      cur.cell = behind;
    } else if (at(cur.cell, turn_right(cur.heading)) == want) {
      moves.push_back(Move::RotateLeft);
      cur.heading = turn_right(cur.heading);
    } else if (at(cur.cell, turn_left(cur.heading)) == want) {
      moves.push_back(Move::RotateRight);
      cur.heading = turn_left(cur.heading);
    } else {
      throw Error("action search: inconsistent cost table");
    }
    --k;
  }
  std::reverse(moves.begin(), moves.end());
  return moves;
}

}  // namespace

ActionField::ActionField(Pose start, int width, std::vector<std::int32_t> pose_costs)
    : start_(start), width_(width), pose_costs_(std::move(pose_costs)) {}

std::int32_t ActionField::pose_cost(Cell c, Heading h) const {
  if (c.row < 0 || c.col < 0 || c.col >= width_) return kUnreachable;
  const auto i = (static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
                  static_cast<std::size_t>(c.col)) * 4 + static_cast<std::size_t>(h);
  return i < pose_costs_.size() ? pose_costs_[i] : kUnreachable;
}

std::optional<int> ActionField::to_pose(Pose p) const {
  const auto c = pose_cost(p.cell, p.heading);
  if (c == kUnreachable) return std::nullopt;
  return c;
}

std::optional<int> ActionField::to_cell(Cell c) const {
  std::optional<int> best;
  for (int h = 0; h < 4; ++h) {
    const auto v = pose_cost(c, static_cast<Heading>(h));
    if (v != kUnreachable && (!best || v < *best)) best = v;
  }
  return best;
}

std::vector<Move> ActionField::moves_to(Cell goal) const {
  const auto height = static_cast<int>(pose_costs_.size() / 4 / static_cast<std::size_t>(width_));
  return backtrack(width_, height, pose_costs_, goal, nullptr);
}

ActionField action_field(const GridMap& map, Pose start) {
  return ActionField(start, map.width(), pose_bfs(map, start, nullptr));
}

std::optional<int> action_distance(const GridMap& map, Pose start, Cell goal) {
  if (!map.is_free(goal)) return std::nullopt;
  return action_field(map, start).to_cell(goal);
}

std::optional<GeodesicRoute> fewest_action_geodesic_route(const GridMap& map, Pose start,
                                                          Cell goal) {
  if (!map.is_free(goal) || !map.is_free(start.cell)) return std::nullopt;
  const auto from_start = geodesic_field(map, start.cell);
  const auto to_goal = geodesic_field(map, goal);
  if (!to_goal.reachable(start.cell)) return std::nullopt;
  const auto total = to_goal.raw(start.cell);
  const ForwardFilter on_geodesic = [&](Cell from, Cell to) {
    return from_start.raw(to) == from_start.raw(from) + 1 &&
           from_start.raw(to) + to_goal.raw(to) == total;
  };
  const auto cost = pose_bfs(map, start, on_geodesic);
  std::optional<int> best;
  for (int h = 0; h < 4; ++h) {
    const auto c = cost[pose_index(map, goal, static_cast<Heading>(h))];
    if (c != ActionField::kUnreachable && (!best || c < *best)) best = c;
  }
  if (!best) return std::nullopt;
  return GeodesicRoute{*best, backtrack(map.width(), map.height(), cost, goal, on_geodesic)};
}

Pose apply_move(const GridMap& map, Pose pose, Move move) {
  switch (move) {
    case Move::Forward: {
      const Cell ahead = neighbor(pose.cell, pose.heading);
      if (map.is_free(ahead)) pose.cell = ahead;
      return pose;
    }
    case Move::RotateLeft: pose.heading = turn_left(pose.heading); return pose;
    case Move::RotateRight: pose.heading = turn_right(pose.heading); return pose;
  }
  return pose;
}

}  // namespace davnav
