#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridwm/board.hpp"
#include "gridwm/rng.hpp"

namespace gridwm::world {

struct WorldConfig {
  int height = 8;
  int width = 8;
  int min_objects = 3;
  int max_objects = 6;
  double noop_fraction = 0.5;  // fraction of rollout steps that change nothing
  // Relative draw weights for Move / Recolor / Remove / Add.
  std::array<double, 4> action_kind_weights = {1.0, 1.0, 1.0, 1.0};

  void validate() const;  // throws ConfigInvalid
};

enum class Provenance : uint8_t { Supervised = 0, Synthetic = 1 };
const char* provenance_name(Provenance p);

struct TrajectoryTriplet {
  Board source;
  Action action;
  Board target;
  std::string surface;  // render_action(action)
  Provenance provenance = Provenance::Supervised;
  uint64_t seed = 0;
};

struct Episode {
  std::vector<Board> frames;
  // actions[t] transforms frames[t] into frames[t+1]; nullopt marks a no-op
  // step (the frame repeats).
  std::vector<std::optional<Action>> actions;
  uint64_t seed = 0;
};

Board sample_board(Rng& rng, const WorldConfig& config);

// Draws a feasible action on `board`: kind by configured weights, then uniform
// over the feasible actions of that kind. Kinds with no feasible action are
// excluded from the draw.
Action sample_action(Rng& rng, const Board& board, const WorldConfig& config);

TrajectoryTriplet sample_triplet(uint64_t rng_seed, const WorldConfig& config);

Episode rollout_episode(uint64_t rng_seed, int length,
                        const WorldConfig& config);

// Line-delimited JSON serialization.
std::string triplet_to_json(const TrajectoryTriplet& t);
TrajectoryTriplet triplet_from_json(const std::string& line);
void save_triplets(const std::string& path,
                   const std::vector<TrajectoryTriplet>& triplets);
std::vector<TrajectoryTriplet> load_triplets(const std::string& path);

std::string episode_to_json(const Episode& e);
Episode episode_from_json(const std::string& line);
void save_episodes(const std::string& path, const std::vector<Episode>& eps);
std::vector<Episode> load_episodes(const std::string& path);

}  // namespace gridwm::world
