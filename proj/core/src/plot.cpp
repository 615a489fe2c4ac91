#include "davnav/plot.hpp"

#include <cstdio>
#include <sstream>

#include "davnav/geodesic.hpp"

namespace davnav {

std::vector<Cell> intercept_path(const GridMap& map, Pose start, const InterceptResult& oracle) {
  if (!oracle.feasible) return {};
  const auto route = fewest_action_geodesic_route(map, start, oracle.catch_cell);
  if (!route) return {};
  std::vector<Cell> cells{start.cell};
  Pose pose = start;
  for (const Move m : route->moves) {
    pose = apply_move(map, pose, m);
    if (pose.cell != cells.back()) cells.push_back(pose.cell);
  }
  return cells;
}

namespace {

constexpr int kCell = 16;

std::string polyline(const std::vector<Cell>& cells, const char* color, double offset, double width) {
  std::ostringstream s;
  s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
    << "\" stroke-linejoin=\"round\" points=\"";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s << ' ';
    s << (cells[i].col + 0.5) * kCell + offset << ',' << (cells[i].row + 0.5) * kCell + offset;
  }
  s << "\"/>\n";
  return s.str();
}

std::string cell_list(const std::vector<Cell>& cells) {
  std::string out;
  for (const Cell c : cells) {
    if (!out.empty()) out += ' ';
    out += "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
  }
  return out;
}

}  // namespace

std::string plot_episode_svg(const GridMap& map, const EpisodeLog& log, const InterceptResult& oracle) {
  std::vector<Cell> agent{log.start.cell};
  std::vector<Cell> target{log.target_start};
  for (const auto& r : log.records) {
    if (r.pose.cell != agent.back()) agent.push_back(r.pose.cell);
    if (r.target != target.back()) target.push_back(r.target);
  }
  const auto g_path = intercept_path(map, log.start, oracle);

  const int w = map.width() * kCell;
  const int h = map.height() * kCell;
  const int text_h = 64;
  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h + text_h
    << "\" viewBox=\"0 0 " << w << ' ' << h + text_h << "\">\n";
  s << "<title>" << log.episode_id << " on " << log.map_name << "</title>\n";
  s << "<desc>agent=blue target=red intercept=green; g_path " << cell_list(g_path) << "</desc>\n";
  s << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      if (map.is_occupied({r, c})) {
        s << "<rect x=\"" << c * kCell << "\" y=\"" << r * kCell << "\" width=\"" << kCell
          << "\" height=\"" << kCell << "\" fill=\"#777\"/>\n";
      }
    }
  }
  s << "<g id=\"intercept\">" << polyline(g_path, "green", 0, 5) << "</g>\n";
  s << "<g id=\"target\">" << polyline(target, "red", 2, 2.5) << "</g>\n";
  s << "<g id=\"agent\">" << polyline(agent, "blue", -2, 2.5) << "</g>\n";
  auto marker = [&](Cell c, const char* color) {
    s << "<circle cx=\"" << (c.col + 0.5) * kCell << "\" cy=\"" << (c.row + 0.5) * kCell
      << "\" r=\"4\" fill=\"" << color << "\"/>\n";
  };
  marker(log.start.cell, "blue");
  marker(log.target_start, "red");
  if (oracle.feasible) marker(oracle.catch_cell, "green");

  char g_text[64];
  std::snprintf(g_text, sizeof g_text, "%.3f", oracle.g_meters);
  s << "<text x=\"4\" y=\"" << h + 16 << "\" font-family=\"monospace\" font-size=\"11\">"
    << "outcome " << to_string(log.outcome) << "; t* " << oracle.t_star << "; g " << g_text
    << " m</text>\n";
  s << "<text id=\"g-path\" x=\"4\" y=\"" << h + 34
    << "\" font-family=\"monospace\" font-size=\"9\">g path " << cell_list(g_path) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace davnav
