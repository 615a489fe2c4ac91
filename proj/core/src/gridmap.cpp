#include "davnav/gridmap.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

namespace davnav {

GridMap::GridMap(int width, int height, double resolution,
                 std::vector<std::uint8_t> occupied, std::string name)
    : width_(width), height_(height), resolution_(resolution),
      name_(std::move(name)), occupied_(std::move(occupied)) {
  if (width_ < 3 || height_ < 3) throw Error("GridMap: dimensions must be at least 3x3");
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_)) {
    throw Error("GridMap: resolution must be positive");
  }
  if (name_.find('\n') != std::string::npos) throw Error("GridMap: name contains a newline");
  if (occupied_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw Error("GridMap: occupancy size does not match dimensions");
  }
  for (auto& v : occupied_) v = v ? 1 : 0;
  for (int c = 0; c < width_; ++c) {
    occupied_[index({0, c})] = 1;
    occupied_[index({height_ - 1, c})] = 1;
  }
  for (int r = 0; r < height_; ++r) {
    occupied_[index({r, 0})] = 1;
    occupied_[index({r, width_ - 1})] = 1;
  }

  for (std::size_t i = 0; i < occupied_.size(); ++i) {
    if (!occupied_[i]) free_cells_.push_back(cell_at(i));
  }
  if (free_cells_.empty()) throw Error("GridMap: no free cells");

  component_.assign(occupied_.size(), -1);
  std::queue<Cell> frontier;
  for (const Cell seed : free_cells_) {
    if (component_[index(seed)] != -1) continue;
    const int label = component_count_++;
    component_[index(seed)] = label;
    frontier.push(seed);
    while (!frontier.empty()) {
      const Cell cur = frontier.front();
      frontier.pop();
      for (int h = 0; h < 4; ++h) {
        const Cell next = neighbor(cur, static_cast<Heading>(h));
        if (is_free(next) && component_[index(next)] == -1) {
          component_[index(next)] = label;
          frontier.push(next);
        }
      }
    }
  }
}

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string_view header_value(const std::string& line, std::string_view key, int line_no) {
  if (line.size() <= key.size() || line.compare(0, key.size(), key) != 0 ||
      line[key.size()] != ' ') {
    throw ParseError("map line " + std::to_string(line_no) + ": expected '" +
                     std::string(key) + " <value>'");
  }
  return std::string_view(line).substr(key.size() + 1);
}

}  // namespace

GridMap parse_map(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "davmap v1") {
    throw ParseError("map line 1: expected 'davmap v1'");
  }
  if (lines.size() < 2) throw ParseError("map: missing resolution header");
  const auto res_text = header_value(lines[1], "resolution", 2);
  double resolution = 0.0;
  {
    const auto* begin = res_text.data();
    const auto* end = res_text.data() + res_text.size();
    auto [ptr, ec] = std::from_chars(begin, end, resolution);
    if (ec != std::errc() || ptr != end || !(resolution > 0.0)) {
      throw ParseError("map line 2: resolution must be a positive number");
    }
  }
  if (lines.size() < 3) throw ParseError("map: missing name header");
  std::string name(header_value(lines[2], "name", 3));

  const std::size_t rows = lines.size() - 3;
  if (rows == 0) throw ParseError("map: no grid rows");
  const std::size_t cols = lines[3].size();
  if (cols == 0) throw ParseError("map line 4: empty grid row");

  std::vector<std::uint8_t> cells;
  cells.reserve(rows * cols);
  std::size_t free_count = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& line = lines[r + 3];
    const auto line_no = std::to_string(r + 4);
    if (line.size() != cols) throw ParseError("map line " + line_no + ": non-rectangular row");
    for (const char ch : line) {
      if (ch == '#') {
        cells.push_back(1);
      } else if (ch == '.') {
        cells.push_back(0);
        ++free_count;
      } else {
        throw ParseError("map line " + line_no + ": unknown character '" + std::string(1, ch) + "'");
      }
    }
  }
  if (free_count == 0) throw ParseError("map: zero free cells");

  bool sealed = true;
  for (std::size_t r = 0; r < rows && sealed; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const bool border = r == 0 || c == 0 || r + 1 == rows || c + 1 == cols;
      if (border && cells[r * cols + c] == 0) {
        sealed = false;
        break;
      }
    }
  }
  if (sealed) {
    return GridMap(static_cast<int>(cols), static_cast<int>(rows), resolution,
                   std::move(cells), std::move(name));
  }

  const std::size_t w = cols + 2;
  const std::size_t h = rows + 2;
  std::vector<std::uint8_t> wrapped(w * h, 1);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) wrapped[(r + 1) * w + (c + 1)] = cells[r * cols + c];
  }
  return GridMap(static_cast<int>(w), static_cast<int>(h), resolution, std::move(wrapped),
                 std::move(name));
}

std::string serialize_map(const GridMap& map) {
  std::ostringstream out;
  out << "davmap v1\n";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), map.resolution());
  out << "resolution " << std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data()))
      << "\n";
  out << "name " << map.name() << "\n";
  for (int r = 0; r < map.height(); ++r) {
    std::string row(static_cast<std::size_t>(map.width()), '.');
    for (int c = 0; c < map.width(); ++c) {
      if (map.is_occupied({r, c})) row[static_cast<std::size_t>(c)] = '#';
    }
    out << row << "\n";
  }
  return out.str();
}

GridMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open map file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_map(buffer.str());
}

void save_map(const GridMap& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write map file: " + path.string());
  out << serialize_map(map);
}

}  // namespace davnav
