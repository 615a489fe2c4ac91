#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "davnav/types.hpp"

namespace davnav {

// Occupancy grid. Border cells are always occupied and at least one cell
// is free; immutable after construction.
class GridMap {
 public:
  // `occupied` is row-major, width*height entries, nonzero = occupied.
  GridMap(int width, int height, double resolution,
          std::vector<std::uint8_t> occupied, std::string name);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  const std::string& name() const { return name_; }

  std::size_t cell_count() const { return occupied_.size(); }
  bool in_bounds(Cell c) const {
    return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_;
  }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(width_)),
            static_cast<int>(index % static_cast<std::size_t>(width_))};
  }
  bool is_free(Cell c) const { return in_bounds(c) && occupied_[index(c)] == 0; }
  bool is_occupied(Cell c) const { return !is_free(c); }

  // Free cells in row-major order.
  const std::vector<Cell>& free_cells() const { return free_cells_; }

  // 4-connected component label of a free cell; -1 for occupied cells.
  int component(Cell c) const { return is_free(c) ? component_[index(c)] : -1; }
  int component_count() const { return component_count_; }
  bool connected(Cell a, Cell b) const {
    return is_free(a) && is_free(b) && component_[index(a)] == component_[index(b)];
  }

  const std::vector<std::uint8_t>& occupancy() const { return occupied_; }

  friend bool operator==(const GridMap& a, const GridMap& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.resolution_ == b.resolution_ && a.name_ == b.name_ &&
           a.occupied_ == b.occupied_;
  }

 private:
  int width_;
  int height_;
  double resolution_;
  std::string name_;
  std::vector<std::uint8_t> occupied_;
  std::vector<Cell> free_cells_;
  std::vector<int> component_;
  int component_count_ = 0;
};

// Text format:
//   davmap v1
//   resolution <meters>
//   name <string>
//   H rows of W characters, '#' occupied, '.' free
// A border row/column is added around the grid when the document's own
// border is not fully occupied.
GridMap parse_map(std::string_view text);
std::string serialize_map(const GridMap& map);
GridMap load_map(const std::filesystem::path& path);
void save_map(const GridMap& map, const std::filesystem::path& path);

struct MapGenParams {
  int width = 24;
  int height = 24;
  int rooms = 4;
  int min_room = 3;
  int max_room = 7;
  double resolution = 1.0;
  std::string name = "generated";
};

// Rooms joined by L-shaped corridors; the free space is one connected
// component. Throws ConfigError when the parameters cannot fit.
GridMap generate_map(std::uint64_t seed, const MapGenParams& params);

}  // namespace davnav
