#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridwm/errors.hpp"

namespace gridwm::world {

enum class Shape : uint8_t { Square = 0, Circle = 1, Triangle = 2 };
enum class Color : uint8_t { Red = 0, Green = 1, Blue = 2, Yellow = 3 };
enum class Direction : uint8_t { Left = 0, Right = 1, Up = 2, Down = 3 };

inline constexpr int kNumShapes = 3;
inline constexpr int kNumColors = 4;
// EMPTY plus every (shape, color) combination.
inline constexpr int kNumCellStates = 1 + kNumShapes * kNumColors;

const char* shape_name(Shape s);
const char* color_name(Color c);
const char* direction_name(Direction d);
std::optional<Shape> shape_from_name(std::string_view s);
std::optional<Color> color_from_name(std::string_view s);
std::optional<Direction> direction_from_name(std::string_view s);

// A cell is EMPTY (code 0) or an object with a shape and a color
// (codes 1..12). The code doubles as the image-token payload downstream.
struct Cell {
  uint8_t code = 0;

  static Cell empty() { return Cell{0}; }
  static Cell object(Shape s, Color c) {
    return Cell{static_cast<uint8_t>(
        1 + static_cast<int>(s) * kNumColors + static_cast<int>(c))};
  }
  bool is_empty() const { return code == 0; }
  Shape shape() const {
    return static_cast<Shape>((code - 1) / kNumColors);
  }
  Color color() const {
    return static_cast<Color>((code - 1) % kNumColors);
  }
  bool operator==(const Cell&) const = default;
};

struct Board {
  int height = 8;
  int width = 8;
  std::vector<Cell> cells;  // row-major, height*width entries

  Board() : cells(64) {}
  Board(int h, int w) : height(h), width(w), cells(static_cast<size_t>(h) * w) {}

  Cell& at(int r, int c) { return cells[static_cast<size_t>(r) * width + c]; }
  const Cell& at(int r, int c) const {
    return cells[static_cast<size_t>(r) * width + c];
  }
  bool in_bounds(int r, int c) const {
    return r >= 0 && r < height && c >= 0 && c < width;
  }
  // Unique by construction: at most one object per (color, shape).
  std::optional<std::pair<int, int>> find(Color color, Shape shape) const;
  int count_objects() const;
  bool operator==(const Board&) const = default;
};

struct Action {
  enum class Kind : uint8_t { Move = 0, Recolor = 1, Remove = 2, Add = 3 };

  Kind kind = Kind::Move;
  Color subject_color = Color::Red;
  Shape subject_shape = Shape::Square;
  Direction dir = Direction::Left;      // Move only
  Color new_color = Color::Red;         // Recolor only
  int row = 0, col = 0;                 // Add only

  bool operator==(const Action&) const = default;

  static Action move(Color c, Shape s, Direction d);
  static Action recolor(Color c, Shape s, Color to);
  static Action remove(Color c, Shape s);
  static Action add(Color c, Shape s, int row, int col);
};

const char* action_kind_name(Action::Kind k);

// Fixed template grammar:
//   move the <color> <shape> <direction>
//   paint the <color> <shape> <color>
//   remove the <color> <shape>
//   add a <color> <shape> at row <digit> col <digit>
std::string render_action(const Action& a);
std::optional<Action> parse_action(std::string_view text);

// Every well-formed surface string in the grammar, for 8x8 coordinates.
std::vector<Action> enumerate_grammar(int height = 8, int width = 8);

// Ground-truth transition. Throws MissingSubject / Occupied / OutOfBounds.
// Occupied also covers identity conflicts: a Recolor or Add that would create
// a second object with the same (color, shape) pair.
Board apply_action(const Board& board, const Action& action);

// True iff apply_action would succeed.
bool action_feasible(const Board& board, const Action& action);

}  // namespace gridwm::world
