#pragma once

// Reference implementations used only by tests. They are deliberately
// naive so they share no code paths with the library.

#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "davnav/gridmap.hpp"
#include "davnav/rng.hpp"

namespace davnav::testing {

inline GridMap map_from_rows(const std::vector<std::string>& rows, double resolution = 1.0,
                             const std::string& name = "test") {
  std::string doc = "davmap v1\nresolution " + std::to_string(resolution) + "\nname " + name + "\n";
  for (const auto& r : rows) doc += r + "\n";
  return parse_map(doc);
}

// Open room of w x h free cells inside a one-cell wall.
inline GridMap open_room(int w, int h, double resolution = 1.0) {
  std::vector<std::string> rows;
  rows.push_back(std::string(static_cast<std::size_t>(w) + 2, '#'));
  for (int r = 0; r < h; ++r) rows.push_back("#" + std::string(static_cast<std::size_t>(w), '.') + "#");
  rows.push_back(std::string(static_cast<std::size_t>(w) + 2, '#'));
  return map_from_rows(rows, resolution);
}

// Random interior walls with the given density, border sealed.
inline GridMap random_map(std::uint64_t seed, int w, int h, double wall_density,
                          double resolution = 1.0) {
  Rng rng(seed);
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(w * h), 1);
  bool any_free = false;
  for (int r = 1; r < h - 1; ++r) {
    for (int c = 1; c < w - 1; ++c) {
      const bool wall = rng.uniform() < wall_density;
      occ[static_cast<std::size_t>(r * w + c)] = wall ? 1 : 0;
      any_free = any_free || !wall;
    }
  }
  if (!any_free) occ[static_cast<std::size_t>(w + 1)] = 0;
  return GridMap(w, h, resolution, std::move(occ), "random");
}

// All-pairs hop distances by Floyd-Warshall over free cells; -1 = unreachable.
inline std::vector<std::vector<int>> floyd_warshall(const GridMap& map) {
  const auto& cells = map.free_cells();
  const std::size_t n = cells.size();
  constexpr int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const int dr = cells[i].row - cells[j].row, dc = cells[i].col - cells[j].col;
      if (dr * dr + dc * dc == 1) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (auto& row : d)
    for (auto& v : row)
      if (v >= inf) v = -1;
  return d;
}

// Minimum action count to reach `goal` from (cell, heading) by Dijkstra on an
// explicit pose graph (heading encoded as dr/dc vectors, not the library's
// enum arithmetic).
inline std::optional<int> pose_graph_distance(const GridMap& map, Cell start, int heading, Cell goal) {
  constexpr int dr[4] = {-1, 0, 1, 0};
  constexpr int dc[4] = {0, 1, 0, -1};
  const int w = map.width(), h = map.height();
  std::vector<int> dist(static_cast<std::size_t>(w * h * 4), std::numeric_limits<int>::max());
  using Item = std::pair<int, int>;  // cost, state
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  auto state = [&](int r, int c, int hd) { return (r * w + c) * 4 + hd; };
  dist[static_cast<std::size_t>(state(start.row, start.col, heading))] = 0;
  pq.push({0, state(start.row, start.col, heading)});
  while (!pq.empty()) {
    const auto [cost, s] = pq.top();
    pq.pop();
    if (cost > dist[static_cast<std::size_t>(s)]) continue;
    const int hd = s % 4, cell = s / 4, r = cell / w, c = cell % w;
    if (r == goal.row && c == goal.col) return cost;
    std::vector<int> next{state(r, c, (hd + 1) % 4), state(r, c, (hd + 3) % 4)};
    const int nr = r + dr[hd], nc = c + dc[hd];
    if (map.is_free({nr, nc})) next.push_back(state(nr, nc, hd));
    for (const int t : next) {
      if (cost + 1 < dist[static_cast<std::size_t>(t)]) {
        dist[static_cast<std::size_t>(t)] = cost + 1;
        pq.push({cost + 1, t});
      }
    }
  }
  return std::nullopt;
}

// |X_k| of a length-N real signal by the O(N^2) definition.
inline std::vector<double> direct_dft_magnitude(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) {
    std::complex<double> acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(a), std::sin(a));
    }
    mag[k] = std::abs(acc);
  }
  return mag;
}

// Upper-tail p-value of Pearson's chi-squared statistic against a uniform
// distribution over the observed categories.
inline double chi_squared_uniform_p(const std::vector<long>& counts) {
  long total = 0;
  for (const long c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (const long c : counts) stat += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Hop distance by plain BFS; -1 when unreachable.
inline int bfs_hops(const GridMap& map, Cell from, Cell to) {
  if (!map.is_free(from) || !map.is_free(to)) return -1;
  std::vector<int> dist(map.cell_count(), -1);
  std::queue<Cell> q;
  dist[map.index(from)] = 0;
  q.push(from);
  while (!q.empty()) {
    const Cell u = q.front();
    q.pop();
    if (u == to) return dist[map.index(u)];
    const Cell nb[4] = {{u.row - 1, u.col}, {u.row + 1, u.col}, {u.row, u.col - 1}, {u.row, u.col + 1}};
    for (const Cell v : nb) {
      if (map.is_free(v) && dist[map.index(v)] < 0) {
        dist[map.index(v)] = dist[map.index(u)] + 1;
        q.push(v);
      }
    }
  }
  return -1;
}

struct BruteIntercept {
  bool feasible = false;
  int t = -1;
  Cell cell;
  double g_meters = 0.0;
  int g_actions = 0;
};

// Exhaustive search over every (t, node) pair: the earliest t at which some
// node both hosts the target and is reachable by the agent within t actions.
inline BruteIntercept brute_force_intercept(const GridMap& map, Cell start, int heading,
                                            const std::vector<Cell>& trajectory) {
  std::vector<std::optional<int>> reach;
  for (const Cell node : map.free_cells()) reach.push_back(pose_graph_distance(map, start, heading, node));
  BruteIntercept best;
  for (int t = 0; t < static_cast<int>(trajectory.size()) && !best.feasible; ++t) {
    for (std::size_t n = 0; n < map.free_cells().size(); ++n) {
      const Cell node = map.free_cells()[n];
      if (node != trajectory[static_cast<std::size_t>(t)]) continue;
      if (reach[n] && *reach[n] <= t) {
        best.feasible = true;
        best.t = t;
        best.cell = node;
        best.g_actions = *reach[n];
        best.g_meters = bfs_hops(map, start, node) * map.resolution();
        break;
      }
    }
  }
  return best;
}

// Random walk of `steps` moves (holding with probability `hold`) from a
// free cell.
inline std::vector<Cell> random_walk(const GridMap& map, Cell from, int steps, double hold, Rng& rng) {
  std::vector<Cell> out{from};
  Cell c = from;
  for (int i = 0; i < steps; ++i) {
    if (rng.uniform() >= hold) {
      const Cell nb[4] = {{c.row - 1, c.col}, {c.row + 1, c.col}, {c.row, c.col - 1}, {c.row, c.col + 1}};
      const Cell n = nb[rng.index(4)];
      if (map.is_free(n)) c = n;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace davnav::testing
