#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "davnav/gridmap.hpp"
#include "davnav/types.hpp"

namespace davnav {

struct ScanParams {
  int ray_count = 9;
  double fov_deg = 90.0;
  double max_range_m = 5.0;
};

// Range-sensor proxy. Ray i points at heading + angles[i] (radians,
// positive = left). Ranges are agent-cell-center to hit-cell-center
// distances, capped at max_range_m.
struct RangeScan {
  Pose pose;
  int ray_count = 0;
  double fov_deg = 0.0;
  double max_range_m = 0.0;
  double resolution = 1.0;
  int grid_width = 0;
  int grid_height = 0;
  std::vector<double> angles;
  std::vector<double> ranges;
  std::vector<std::optional<Cell>> hit_cells;
};

// Relative ray angles, cell-centered across the field of view.
std::vector<double> ray_angles(int ray_count, double fov_deg);

// Cells visited by a grid traversal from the center of `pose.cell` along
// heading + relative_angle, in order, whose entry point lies within
// max_range_cells. Stops at the grid boundary.
struct RayCell {
  Cell cell;
  double entry;  // ray parameter (cells) at which the ray enters the cell
};
std::vector<RayCell> trace_ray(Pose pose, double relative_angle, double max_range_cells,
                               int grid_width, int grid_height);

RangeScan ray_scan(const GridMap& map, Pose pose, const ScanParams& params);

// Allocentric two-channel map built from scans.
class GeometricMap {
 public:
  GeometricMap(int width, int height)
      : width_(width), height_(height),
        explored_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0),
        occupied_(explored_.size(), 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool explored(Cell c) const { return explored_[index(c)] != 0; }
  bool occupied(Cell c) const { return occupied_[index(c)] != 0; }
  std::size_t explored_count() const;
  std::size_t occupied_count() const;

  // Traversed cells become explored+free, hit cells explored+occupied.
  // Throws Error on a dimension mismatch with the scan.
  void integrate(const RangeScan& scan);

  const std::vector<std::uint8_t>& explored_channel() const { return explored_; }
  const std::vector<std::uint8_t>& occupied_channel() const { return occupied_; }

  friend bool operator==(const GeometricMap&, const GeometricMap&) = default;

 private:
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> explored_;
  std::vector<std::uint8_t> occupied_;
};

GeometricMap update_geometric_map(GeometricMap gmap, const RangeScan& scan);

}  // namespace davnav
