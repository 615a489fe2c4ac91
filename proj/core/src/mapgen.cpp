#include <algorithm>

#include "davnav/gridmap.hpp"
#include "davnav/rng.hpp"

namespace davnav {

namespace {

struct Room {
  int top, left, height, width;
  Cell center() const { return {top + height / 2, left + width / 2}; }
};

void carve(std::vector<std::uint8_t>& occ, int width, Cell c) {
  occ[static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width) +
      static_cast<std::size_t>(c.col)] = 0;
}

}  // namespace

GridMap generate_map(std::uint64_t seed, const MapGenParams& params) {
  if (params.rooms < 1) throw ConfigError("generate_map: at least one room required");
  if (params.width < 5 || params.height < 5) {
    throw ConfigError("generate_map: map dimensions must be at least 5x5");
  }
  if (params.min_room < 1 || params.max_room < params.min_room) {
    throw ConfigError("generate_map: invalid room size range");
  }
  const int interior_w = params.width - 2;
  const int interior_h = params.height - 2;
  if (params.min_room > interior_w || params.min_room > interior_h) {
    throw ConfigError("generate_map: rooms do not fit in the requested dimensions");
  }
  if (!(params.resolution > 0.0)) throw ConfigError("generate_map: resolution must be positive");

  Rng rng(Rng::derive(seed, 0x6d6170));
  std::vector<std::uint8_t> occ(
      static_cast<std::size_t>(params.width) * static_cast<std::size_t>(params.height), 1);

  std::vector<Room> rooms;
  rooms.reserve(static_cast<std::size_t>(params.rooms));
  for (int i = 0; i < params.rooms; ++i) {
    const int h = rng.uniform_int(params.min_room, std::min(params.max_room, interior_h));
    const int w = rng.uniform_int(params.min_room, std::min(params.max_room, interior_w));
    const int top = rng.uniform_int(1, params.height - 1 - h);
    const int left = rng.uniform_int(1, params.width - 1 - w);
    rooms.push_back({top, left, h, w});
    for (int r = top; r < top + h; ++r) {
      for (int c = left; c < left + w; ++c) carve(occ, params.width, {r, c});
    }
  }

  // Join consecutive rooms with an L corridor; the bend order is random.
  for (std::size_t i = 1; i < rooms.size(); ++i) {
    const Cell a = rooms[i - 1].center();
    const Cell b = rooms[i].center();
    const bool rows_first = rng.bernoulli(0.5);
    const Cell bend = rows_first ? Cell{b.row, a.col} : Cell{a.row, b.col};
    auto walk = [&](Cell from, Cell to) {
      Cell cur = from;
      carve(occ, params.width, cur);
      while (cur != to) {
        if (cur.row != to.row) cur.row += cur.row < to.row ? 1 : -1;
        else cur.col += cur.col < to.col ? 1 : -1;
        carve(occ, params.width, cur);
      }
    };
    walk(a, bend);
    walk(bend, b);
  }

  return GridMap(params.width, params.height, params.resolution, std::move(occ), params.name);
}

}  // namespace davnav
