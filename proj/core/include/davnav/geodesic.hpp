#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "davnav/gridmap.hpp"
#include "davnav/types.hpp"

namespace davnav {

// Breadth-first hop counts from a source cell over the 4-connected free
// graph. Unreachable and occupied cells hold kUnreachable.
class GeodesicField {
 public:
  static constexpr std::int32_t kUnreachable = -1;

  GeodesicField(Cell source, int width, double resolution,
                std::vector<std::int32_t> hops)
      : source_(source), width_(width), resolution_(resolution), hops_(std::move(hops)) {}

  Cell source() const { return source_; }
  double resolution() const { return resolution_; }

  bool reachable(Cell c) const { return raw(c) != kUnreachable; }
  std::optional<int> cells(Cell c) const {
    const auto h = raw(c);
    if (h == kUnreachable) return std::nullopt;
    return h;
  }
  std::optional<double> meters(Cell c) const {
    const auto h = raw(c);
    if (h == kUnreachable) return std::nullopt;
    return h * resolution_;
  }
  std::int32_t raw(Cell c) const {
    if (c.row < 0 || c.col < 0 || c.col >= width_) return kUnreachable;
    const auto i = static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(c.col);
    return i < hops_.size() ? hops_[i] : kUnreachable;
  }
  const std::vector<std::int32_t>& hops() const { return hops_; }

 private:
  Cell source_;
  int width_;
  double resolution_;
  std::vector<std::int32_t> hops_;
};

// Throws Error when the source is occupied.
GeodesicField geodesic_field(const GridMap& map, Cell source);

// One shortest cell path from `from` to `to` (inclusive of both ends),
// descending the field rooted at `to`. Ties between equally short next
// cells prefer ahead, then left, right, behind, relative to the direction of
// the previous segment; `initial` orients the first segment. Empty when
// unreachable.
std::vector<Cell> shortest_path(const GridMap& map, const GeodesicField& to_field,
                                Cell from, Heading initial);
std::vector<Cell> shortest_path(const GridMap& map, Cell from, Cell to, Heading initial);

// Minimum number of {Forward, RotateLeft, RotateRight} actions from a pose
// to every cell, any final heading, over the (cell x heading) pose graph.
class ActionField {
 public:
  static constexpr std::int32_t kUnreachable = -1;

  ActionField(Pose start, int width, std::vector<std::int32_t> pose_costs);

  Pose start() const { return start_; }
  std::optional<int> to_cell(Cell c) const;
  std::optional<int> to_pose(Pose p) const;

  // Minimum-action move sequence to `goal`; deterministic. Empty when the
  // goal is the start cell or unreachable (check to_cell first).
  std::vector<Move> moves_to(Cell goal) const;

 private:
  std::int32_t pose_cost(Cell c, Heading h) const;

  Pose start_;
  int width_;
  std::vector<std::int32_t> pose_costs_;  // index * 4 + heading
};

ActionField action_field(const GridMap& map, Pose start);
std::optional<int> action_distance(const GridMap& map, Pose start, Cell goal);

// Fewest actions among routes whose cell length equals the geodesic
// distance. Used by the oracle agent so its path length matches g.
struct GeodesicRoute {
  int actions = 0;
  std::vector<Move> moves;
};
std::optional<GeodesicRoute> fewest_action_geodesic_route(const GridMap& map, Pose start,
                                                          Cell goal);

// Pose after applying a move on `map`; blocked Forward leaves the pose as is.
Pose apply_move(const GridMap& map, Pose pose, Move move);

}  // namespace davnav
