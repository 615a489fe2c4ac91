#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace davnav {

struct Cell {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

enum class Heading : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

struct Pose {
  Cell cell;
  Heading heading = Heading::North;

  friend bool operator==(const Pose&, const Pose&) = default;
};

// Low-level motion primitives; Stop is handled by the engine.
enum class Move : std::uint8_t { Forward, RotateLeft, RotateRight };

constexpr Heading turn_left(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 3) % 4);
}
constexpr Heading turn_right(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 1) % 4);
}
constexpr Heading opposite(Heading h) {
  return static_cast<Heading>((static_cast<int>(h) + 2) % 4);
}

// Row grows southwards, column grows eastwards.
constexpr Cell neighbor(Cell c, Heading h) {
  switch (h) {
    case Heading::North: return {c.row - 1, c.col};
    case Heading::East: return {c.row, c.col + 1};
    case Heading::South: return {c.row + 1, c.col};
    case Heading::West: return {c.row, c.col - 1};
  }
  return c;
}

constexpr int manhattan(Cell a, Cell b) {
  return (a.row > b.row ? a.row - b.row : b.row - a.row) +
         (a.col > b.col ? a.col - b.col : b.col - a.col);
}

// Heading of the unit step a -> b, if a and b are 4-adjacent.
std::optional<Heading> direction_between(Cell a, Cell b);

std::string_view to_string(Heading h);
std::optional<Heading> heading_from_string(std::string_view s);
std::string_view to_string(Move m);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace davnav
