#include "gridwm/world.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridwm/io.hpp"

namespace gridwm::world {

using nlohmann::json;

void WorldConfig::validate() const {
  if (height < 2 || width < 2)
    throw ConfigInvalid("world: board dimensions must be >= 2");
  if (min_objects < 1 || max_objects < min_objects)
    throw ConfigInvalid("world: need 1 <= min_objects <= max_objects");
  if (max_objects > kNumShapes * kNumColors)
    throw ConfigInvalid("world: max_objects exceeds distinct identities");
  if (max_objects >= height * width)
    throw ConfigInvalid("world: board too small for max_objects");
  if (noop_fraction < 0.0 || noop_fraction > 1.0)
    throw ConfigInvalid("world: noop_fraction outside [0,1]");
  double total = 0.0;
  for (double w : action_kind_weights) {
    if (w < 0.0) throw ConfigInvalid("world: negative action kind weight");
    total += w;
  }
  if (total <= 0.0) throw ConfigInvalid("world: all action weights zero");
}

const char* provenance_name(Provenance p) {
  return p == Provenance::Supervised ? "supervised" : "synthetic";
}

Board sample_board(Rng& rng, const WorldConfig& config) {
  Board board(config.height, config.width);
  const int span = config.max_objects - config.min_objects + 1;
  const int n_objects =
      config.min_objects + static_cast<int>(rng.next_below(span));

  // Distinct (color, shape) identities.
  std::vector<int> identities(kNumShapes * kNumColors);
  for (size_t i = 0; i < identities.size(); ++i) identities[i] = static_cast<int>(i);
  rng.shuffle(identities);

  // Distinct cells.
  std::vector<int> cells(static_cast<size_t>(config.height) * config.width);
  for (size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
  rng.shuffle(cells);

  for (int i = 0; i < n_objects; ++i) {
    const int id = identities[i];
    const auto shape = static_cast<Shape>(id / kNumColors);
    const auto color = static_cast<Color>(id % kNumColors);
    board.cells[cells[i]] = Cell::object(shape, color);
  }
  return board;
}

namespace {

std::vector<Action> feasible_of_kind(const Board& board, Action::Kind kind) {
  std::vector<Action> out;
  const auto consider = [&](const Action& a) {
    if (action_feasible(board, a)) out.push_back(a);
  };
  for (int c = 0; c < kNumColors; ++c) {
    for (int s = 0; s < kNumShapes; ++s) {
      const auto color = static_cast<Color>(c);
      const auto shape = static_cast<Shape>(s);
      switch (kind) {
        case Action::Kind::Move:
          if (!board.find(color, shape)) break;
          for (int d = 0; d < 4; ++d)
            consider(Action::move(color, shape, static_cast<Direction>(d)));
          break;
        case Action::Kind::Recolor:
          if (!board.find(color, shape)) break;
          for (int to = 0; to < kNumColors; ++to)
            if (to != c)
              consider(Action::recolor(color, shape, static_cast<Color>(to)));
          break;
        case Action::Kind::Remove:
          consider(Action::remove(color, shape));
          break;
        case Action::Kind::Add:
          if (board.find(color, shape)) break;
          for (int r = 0; r < board.height; ++r)
            for (int col = 0; col < board.width; ++col)
              if (board.at(r, col).is_empty())
                out.push_back(Action::add(color, shape, r, col));
          break;
      }
    }
  }
  return out;
}

}  // namespace

Action sample_action(Rng& rng, const Board& board, const WorldConfig& config) {
  std::array<double, 4> weights = config.action_kind_weights;
  for (int attempt = 0; attempt < 4; ++attempt) {
    double total = weights[0] + weights[1] + weights[2] + weights[3];
    if (total <= 0.0) break;
    double pick = rng.next_double() * total;
    int kind = 0;
    for (; kind < 3; ++kind) {
      if (pick < weights[kind]) break;
      pick -= weights[kind];
    }
    const auto feasible =
        feasible_of_kind(board, static_cast<Action::Kind>(kind));
    if (!feasible.empty())
      return feasible[rng.next_below(feasible.size())];
    weights[kind] = 0.0;  // exhausted kind; redraw among the rest
  }
  throw Error("sample_action: no feasible action on board");
}

TrajectoryTriplet sample_triplet(uint64_t rng_seed, const WorldConfig& config) {
  config.validate();
  Rng rng(rng_seed);
  TrajectoryTriplet t;
  t.source = sample_board(rng, config);
  t.action = sample_action(rng, t.source, config);
  t.target = apply_action(t.source, t.action);
  t.surface = render_action(t.action);
  t.provenance = Provenance::Supervised;
  t.seed = rng_seed;
  return t;
}

Episode rollout_episode(uint64_t rng_seed, int length,
                        const WorldConfig& config) {
  config.validate();
  if (length < 2) throw ConfigInvalid("rollout: length must be >= 2");
  Rng rng(rng_seed);
  Episode ep;
  ep.seed = rng_seed;
  ep.frames.reserve(static_cast<size_t>(length));
  ep.frames.push_back(sample_board(rng, config));
  for (int t = 1; t < length; ++t) {
    if (rng.next_double() < config.noop_fraction) {
      ep.frames.push_back(ep.frames.back());
      ep.actions.push_back(std::nullopt);
    } else {
      const Action a = sample_action(rng, ep.frames.back(), config);
      ep.frames.push_back(apply_action(ep.frames.back(), a));
      ep.actions.push_back(a);
    }
  }
  return ep;
}

namespace {

json board_to_json(const Board& b) {
  json rows = json::array();
  for (int r = 0; r < b.height; ++r) {
    json row = json::array();
    for (int c = 0; c < b.width; ++c) row.push_back(b.at(r, c).code);
    rows.push_back(std::move(row));
  }
  return rows;
}

Board board_from_json(const json& rows) {
  const int h = static_cast<int>(rows.size());
  if (h == 0) throw WrongLength("board json: no rows");
  const int w = static_cast<int>(rows[0].size());
  Board b(h, w);
  for (int r = 0; r < h; ++r) {
    if (static_cast<int>(rows[r].size()) != w)
      throw WrongLength("board json: ragged rows");
    for (int c = 0; c < w; ++c) {
      const int code = rows[r][c].get<int>();
      if (code < 0 || code >= kNumCellStates)
        throw InvalidTokenId("board json: bad cell code");
      b.at(r, c).code = static_cast<uint8_t>(code);
    }
  }
  return b;
}

json action_to_json(const Action& a) {
  json j;
  j["kind"] = action_kind_name(a.kind);
  j["color"] = color_name(a.subject_color);
  j["shape"] = shape_name(a.subject_shape);
  switch (a.kind) {
    case Action::Kind::Move:
      j["dir"] = direction_name(a.dir);
      break;
    case Action::Kind::Recolor:
      j["to"] = color_name(a.new_color);
      break;
    case Action::Kind::Remove:
      break;
    case Action::Kind::Add:
      j["row"] = a.row;
      j["col"] = a.col;
      break;
  }
  return j;
}

Action action_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto color = color_from_name(j.at("color").get<std::string>());
  const auto shape = shape_from_name(j.at("shape").get<std::string>());
  if (!color || !shape) throw OutOfVocab("action json: bad color/shape");
  if (kind == "move") {
    const auto dir = direction_from_name(j.at("dir").get<std::string>());
    if (!dir) throw OutOfVocab("action json: bad direction");
    return Action::move(*color, *shape, *dir);
  }
  if (kind == "recolor") {
    const auto to = color_from_name(j.at("to").get<std::string>());
    if (!to) throw OutOfVocab("action json: bad target color");
    return Action::recolor(*color, *shape, *to);
  }
  if (kind == "remove") return Action::remove(*color, *shape);
  if (kind == "add")
    return Action::add(*color, *shape, j.at("row").get<int>(),
                       j.at("col").get<int>());
  throw OutOfVocab("action json: unknown kind " + kind);
}

}  // namespace

std::string triplet_to_json(const TrajectoryTriplet& t) {
  json j;
  j["source"] = board_to_json(t.source);
  j["action"] = action_to_json(t.action);
  j["target"] = board_to_json(t.target);
  j["surface"] = t.surface;
  j["provenance"] = provenance_name(t.provenance);
  j["seed"] = t.seed;
  return j.dump();
}

TrajectoryTriplet triplet_from_json(const std::string& line) {
  const json j = json::parse(line);
  TrajectoryTriplet t;
  t.source = board_from_json(j.at("source"));
  t.action = action_from_json(j.at("action"));
  t.target = board_from_json(j.at("target"));
  t.surface = j.at("surface").get<std::string>();
  t.provenance = j.at("provenance").get<std::string>() == "synthetic"
                     ? Provenance::Synthetic
                     : Provenance::Supervised;
  t.seed = j.at("seed").get<uint64_t>();
  return t;
}

void save_triplets(const std::string& path,
                   const std::vector<TrajectoryTriplet>& triplets) {
  std::string out;
  for (const auto& t : triplets) {
    out += triplet_to_json(t);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<TrajectoryTriplet> load_triplets(const std::string& path) {
  std::vector<TrajectoryTriplet> out;
  for (const auto& line : read_lines(path)) out.push_back(triplet_from_json(line));
  return out;
}

std::string episode_to_json(const Episode& e) {
  json j;
  j["seed"] = e.seed;
  json frames = json::array();
  for (const auto& f : e.frames) frames.push_back(board_to_json(f));
  j["frames"] = std::move(frames);
  json actions = json::array();
  for (const auto& a : e.actions) {
    if (a)
      actions.push_back(action_to_json(*a));
    else
      actions.push_back(nullptr);
  }
  j["actions"] = std::move(actions);
  return j.dump();
}

Episode episode_from_json(const std::string& line) {
  const json j = json::parse(line);
  Episode e;
  e.seed = j.at("seed").get<uint64_t>();
  for (const auto& f : j.at("frames")) e.frames.push_back(board_from_json(f));
  for (const auto& a : j.at("actions")) {
    if (a.is_null())
      e.actions.push_back(std::nullopt);
    else
      e.actions.push_back(action_from_json(a));
  }
  return e;
}

void save_episodes(const std::string& path, const std::vector<Episode>& eps) {
  std::string out;
  for (const auto& e : eps) {
    out += episode_to_json(e);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<Episode> load_episodes(const std::string& path) {
  std::vector<Episode> out;
  for (const auto& line : read_lines(path)) out.push_back(episode_from_json(line));
  return out;
}

}  // namespace gridwm::world
