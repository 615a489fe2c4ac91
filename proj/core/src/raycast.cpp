#include "davnav/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace davnav {

namespace {

double heading_angle(Heading h) {
  switch (h) {
    case Heading::East: return 0.0;
    case Heading::North: return std::numbers::pi / 2;
    case Heading::West: return std::numbers::pi;
    case Heading::South: return -std::numbers::pi / 2;
  }
  return 0.0;
}

constexpr double kAxisEpsilon = 1e-12;

}  // namespace

std::vector<double> ray_angles(int ray_count, double fov_deg) {
  if (ray_count <= 0) throw Error("ray_angles: ray_count must be positive");
  const double fov = fov_deg * std::numbers::pi / 180.0;
  std::vector<double> angles(static_cast<std::size_t>(ray_count));
  for (int i = 0; i < ray_count; ++i) {
    angles[static_cast<std::size_t>(i)] = fov * (ray_count - 2 * i - 1) / (2.0 * ray_count);
  }
  return angles;
}

std::vector<RayCell> trace_ray(Pose pose, double relative_angle, double max_range_cells,
                               int grid_width, int grid_height) {
  const double alpha = heading_angle(pose.heading) + relative_angle;
  double dx = std::cos(alpha);
  double dy = -std::sin(alpha);  // rows grow southwards
  if (std::abs(dx) < kAxisEpsilon) dx = 0.0;
  if (std::abs(dy) < kAxisEpsilon) dy = 0.0;

  constexpr double inf = std::numeric_limits<double>::infinity();
  const int step_col = dx > 0 ? 1 : -1;
  const int step_row = dy > 0 ? 1 : -1;
  const double delta_col = dx != 0.0 ? 1.0 / std::abs(dx) : inf;
  const double delta_row = dy != 0.0 ? 1.0 / std::abs(dy) : inf;
  double next_col = dx != 0.0 ? 0.5 * delta_col : inf;
  double next_row = dy != 0.0 ? 0.5 * delta_row : inf;

  std::vector<RayCell> cells{{pose.cell, 0.0}};
  Cell cur = pose.cell;
  for (;;) {
    double t = 0.0;
    if (next_col <= next_row) {
      t = next_col;
      cur.col += step_col;
      next_col += delta_col;
    } else {
      t = next_row;
      cur.row += step_row;
      next_row += delta_row;
    }
    if (!(t <= max_range_cells)) break;
    if (cur.row < 0 || cur.col < 0 || cur.row >= grid_height || cur.col >= grid_width) break;
    cells.push_back({cur, t});
  }
  return cells;
}

RangeScan ray_scan(const GridMap& map, Pose pose, const ScanParams& params) {
  if (!map.is_free(pose.cell)) throw Error("ray_scan: pose cell is occupied");
  if (!(params.max_range_m > 0.0)) throw Error("ray_scan: max range must be positive");
  RangeScan scan;
  scan.pose = pose;
  scan.ray_count = params.ray_count;
  scan.fov_deg = params.fov_deg;
  scan.max_range_m = params.max_range_m;
  scan.resolution = map.resolution();
  scan.grid_width = map.width();
  scan.grid_height = map.height();
  scan.angles = ray_angles(params.ray_count, params.fov_deg);
  scan.ranges.reserve(scan.angles.size());
  scan.hit_cells.reserve(scan.angles.size());

  const double max_cells = params.max_range_m / map.resolution();
  for (const double angle : scan.angles) {
    double range = params.max_range_m;
    std::optional<Cell> hit;
    for (const auto& rc : trace_ray(pose, angle, max_cells, map.width(), map.height())) {
      if (map.is_occupied(rc.cell)) {
        hit = rc.cell;
        const double center = std::hypot(static_cast<double>(rc.cell.row - pose.cell.row),
                                          static_cast<double>(rc.cell.col - pose.cell.col));
        range = std::min(center * map.resolution(), params.max_range_m);
        break;
      }
    }
    scan.ranges.push_back(range);
    scan.hit_cells.push_back(hit);
  }
  return scan;
}

std::size_t GeometricMap::explored_count() const {
  return static_cast<std::size_t>(std::count(explored_.begin(), explored_.end(), 1));
}

std::size_t GeometricMap::occupied_count() const {
  return static_cast<std::size_t>(std::count(occupied_.begin(), occupied_.end(), 1));
}

void GeometricMap::integrate(const RangeScan& scan) {
  if (scan.grid_width != width_ || scan.grid_height != height_) {
    throw Error("GeometricMap: scan dimensions do not match the map");
  }
  if (scan.angles.size() != scan.hit_cells.size()) throw Error("GeometricMap: malformed scan");
  const double max_cells = scan.max_range_m / scan.resolution;
  for (std::size_t i = 0; i < scan.angles.size(); ++i) {
    const auto& hit = scan.hit_cells[i];
    for (const auto& rc : trace_ray(scan.pose, scan.angles[i], max_cells, width_, height_)) {
      const auto idx = index(rc.cell);
      explored_[idx] = 1;
      if (hit && rc.cell == *hit) {
        occupied_[idx] = 1;
        break;
      }
      occupied_[idx] = 0;
    }
  }
}

GeometricMap update_geometric_map(GeometricMap gmap, const RangeScan& scan) {
  gmap.integrate(scan);
  return gmap;
}

}  // namespace davnav
