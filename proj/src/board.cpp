#include "gridwm/board.hpp"

#include <sstream>

namespace gridwm::world {

namespace {
constexpr std::array<const char*, 3> kShapeNames = {"square", "circle",
                                                    "triangle"};
constexpr std::array<const char*, 4> kColorNames = {"red", "green", "blue",
                                                    "yellow"};
constexpr std::array<const char*, 4> kDirectionNames = {"left", "right", "up",
                                                        "down"};
constexpr std::array<const char*, 4> kKindNames = {"move", "recolor", "remove",
                                                   "add"};

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : text) {
    if (ch == ' ') {
      if (!cur.empty()) words.push_back(std::move(cur)), cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

std::optional<int> digit_from(const std::string& w) {
  if (w.size() == 1 && w[0] >= '0' && w[0] <= '9') return w[0] - '0';
  return std::nullopt;
}
}  // namespace

const char* shape_name(Shape s) { return kShapeNames[static_cast<int>(s)]; }
const char* color_name(Color c) { return kColorNames[static_cast<int>(c)]; }
const char* direction_name(Direction d) {
  return kDirectionNames[static_cast<int>(d)];
}
const char* action_kind_name(Action::Kind k) {
  return kKindNames[static_cast<int>(k)];
}

std::optional<Shape> shape_from_name(std::string_view s) {
  for (int i = 0; i < kNumShapes; ++i)
    if (s == kShapeNames[i]) return static_cast<Shape>(i);
  return std::nullopt;
}
std::optional<Color> color_from_name(std::string_view s) {
  for (int i = 0; i < kNumColors; ++i)
    if (s == kColorNames[i]) return static_cast<Color>(i);
  return std::nullopt;
}
std::optional<Direction> direction_from_name(std::string_view s) {
  for (int i = 0; i < 4; ++i)
    if (s == kDirectionNames[i]) return static_cast<Direction>(i);
  return std::nullopt;
}

std::optional<std::pair<int, int>> Board::find(Color color, Shape shape) const {
  const Cell target = Cell::object(shape, color);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (at(r, c) == target) return std::make_pair(r, c);
  return std::nullopt;
}

int Board::count_objects() const {
  int n = 0;
  for (const Cell& c : cells) n += !c.is_empty();
  return n;
}

Action Action::move(Color c, Shape s, Direction d) {
  Action a;
  a.kind = Kind::Move;
  a.subject_color = c;
  a.subject_shape = s;
  a.dir = d;
  return a;
}
Action Action::recolor(Color c, Shape s, Color to) {
  Action a;
  a.kind = Kind::Recolor;
  a.subject_color = c;
  a.subject_shape = s;
  a.new_color = to;
  return a;
}
Action Action::remove(Color c, Shape s) {
  Action a;
  a.kind = Kind::Remove;
  a.subject_color = c;
  a.subject_shape = s;
  return a;
}
Action Action::add(Color c, Shape s, int row, int col) {
  Action a;
  a.kind = Kind::Add;
  a.subject_color = c;
  a.subject_shape = s;
  a.row = row;
  a.col = col;
  return a;
}

std::string render_action(const Action& a) {
  std::ostringstream out;
  const char* color = color_name(a.subject_color);
  const char* shape = shape_name(a.subject_shape);
  switch (a.kind) {
    case Action::Kind::Move:
      out << "move the " << color << ' ' << shape << ' '
          << direction_name(a.dir);
      break;
    case Action::Kind::Recolor:
      out << "paint the " << color << ' ' << shape << ' '
          << color_name(a.new_color);
      break;
    case Action::Kind::Remove:
      out << "remove the " << color << ' ' << shape;
      break;
    case Action::Kind::Add:
      out << "add a " << color << ' ' << shape << " at row " << a.row
          << " col " << a.col;
      break;
  }
  return out.str();
}

std::optional<Action> parse_action(std::string_view text) {
  const auto w = split_words(text);
  if (w.size() < 4) return std::nullopt;

  if (w[0] == "move" && w.size() == 5 && w[1] == "the") {
    auto c = color_from_name(w[2]);
    auto s = shape_from_name(w[3]);
    auto d = direction_from_name(w[4]);
    if (c && s && d) return Action::move(*c, *s, *d);
    return std::nullopt;
  }
  if (w[0] == "paint" && w.size() == 5 && w[1] == "the") {
    auto c = color_from_name(w[2]);
    auto s = shape_from_name(w[3]);
    auto to = color_from_name(w[4]);
    if (c && s && to && *to != *c) return Action::recolor(*c, *s, *to);
    return std::nullopt;
  }
  if (w[0] == "remove" && w.size() == 4 && w[1] == "the") {
    auto c = color_from_name(w[2]);
    auto s = shape_from_name(w[3]);
    if (c && s) return Action::remove(*c, *s);
    return std::nullopt;
  }
  if (w[0] == "add" && w.size() == 9 && w[1] == "a" && w[4] == "at" &&
      w[5] == "row" && w[7] == "col") {
    auto c = color_from_name(w[2]);
    auto s = shape_from_name(w[3]);
    auto r = digit_from(w[6]);
    auto col = digit_from(w[8]);
    if (c && s && r && col) return Action::add(*c, *s, *r, *col);
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<Action> enumerate_grammar(int height, int width) {
  std::vector<Action> out;
  for (int c = 0; c < kNumColors; ++c) {
    for (int s = 0; s < kNumShapes; ++s) {
      const auto color = static_cast<Color>(c);
      const auto shape = static_cast<Shape>(s);
      for (int d = 0; d < 4; ++d)
        out.push_back(Action::move(color, shape, static_cast<Direction>(d)));
      for (int to = 0; to < kNumColors; ++to)
        if (to != c)
          out.push_back(Action::recolor(color, shape, static_cast<Color>(to)));
      out.push_back(Action::remove(color, shape));
      for (int r = 0; r < height; ++r)
        for (int col = 0; col < width; ++col)
          out.push_back(Action::add(color, shape, r, col));
    }
  }
  return out;
}

Board apply_action(const Board& board, const Action& action) {
  Board next = board;
  switch (action.kind) {
    case Action::Kind::Move: {
      const auto pos = board.find(action.subject_color, action.subject_shape);
      if (!pos) throw MissingSubject("move: subject not on board: " +
                                     render_action(action));
      static constexpr int dr[4] = {0, 0, -1, 1};
      static constexpr int dc[4] = {-1, 1, 0, 0};
      const int r = pos->first + dr[static_cast<int>(action.dir)];
      const int c = pos->second + dc[static_cast<int>(action.dir)];
      if (!board.in_bounds(r, c))
        throw OutOfBounds("move: destination off the board: " +
                          render_action(action));
      if (!board.at(r, c).is_empty())
        throw Occupied("move: destination occupied: " + render_action(action));
      next.at(r, c) = board.at(pos->first, pos->second);
      next.at(pos->first, pos->second) = Cell::empty();
      return next;
    }
    case Action::Kind::Recolor: {
      const auto pos = board.find(action.subject_color, action.subject_shape);
      if (!pos) throw MissingSubject("recolor: subject not on board: " +
                                     render_action(action));
      if (board.find(action.new_color, action.subject_shape))
        throw Occupied("recolor: target identity already on board: " +
                       render_action(action));
      next.at(pos->first, pos->second) =
          Cell::object(action.subject_shape, action.new_color);
      return next;
    }
    case Action::Kind::Remove: {
      const auto pos = board.find(action.subject_color, action.subject_shape);
      if (!pos) throw MissingSubject("remove: subject not on board: " +
                                     render_action(action));
      next.at(pos->first, pos->second) = Cell::empty();
      return next;
    }
    case Action::Kind::Add: {
      if (!board.in_bounds(action.row, action.col))
        throw OutOfBounds("add: cell outside grid: " + render_action(action));
      if (!board.at(action.row, action.col).is_empty())
        throw Occupied("add: cell occupied: " + render_action(action));
      if (board.find(action.subject_color, action.subject_shape))
        throw Occupied("add: identity already on board: " +
                       render_action(action));
      next.at(action.row, action.col) =
          Cell::object(action.subject_shape, action.subject_color);
      return next;
    }
  }
  throw Error("unreachable action kind");
}

bool action_feasible(const Board& board, const Action& action) {
  try {
    apply_action(board, action);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace gridwm::world
