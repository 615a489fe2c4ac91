#include "davnav/types.hpp"

namespace davnav {

std::optional<Heading> direction_between(Cell a, Cell b) {
  const int dr = b.row - a.row;
  const int dc = b.col - a.col;
  if (dr == -1 && dc == 0) return Heading::North;
  if (dr == 1 && dc == 0) return Heading::South;
  if (dr == 0 && dc == 1) return Heading::East;
  if (dr == 0 && dc == -1) return Heading::West;
  return std::nullopt;
}

std::string_view to_string(Heading h) {
  switch (h) {
    case Heading::North: return "N";
    case Heading::East: return "E";
    case Heading::South: return "S";
    case Heading::West: return "W";
  }
  return "?";
}

std::optional<Heading> heading_from_string(std::string_view s) {
  if (s == "N") return Heading::North;
  if (s == "E") return Heading::East;
  if (s == "S") return Heading::South;
  if (s == "W") return Heading::West;
  return std::nullopt;
}

std::string_view to_string(Move m) {
  switch (m) {
    case Move::Forward: return "forward";
    case Move::RotateLeft: return "rotate_left";
    case Move::RotateRight: return "rotate_right";
  }
  return "?";
}

}  // namespace davnav
