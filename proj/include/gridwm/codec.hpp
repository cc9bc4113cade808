#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridwm/board.hpp"
#include "gridwm/world.hpp"

namespace gridwm::codec {

using world::Board;
using world::TrajectoryTriplet;

// Unified token space over one grid size: image ids (one per cell state),
// word ids for the closed action grammar, then specials. Image and text
// ranges are disjoint so sampling can mask by modality.
class Vocab {
 public:
  static Vocab build(int board_height = 8, int board_width = 8);

  int board_height() const { return height_; }
  int board_width() const { return width_; }
  int image_span() const { return height_ * width_; }

  int size() const { return size_; }
  int image_begin() const { return 0; }
  int image_end() const { return world::kNumCellStates; }
  int text_begin() const { return world::kNumCellStates; }
  int text_end() const { return text_end_; }
  int bos() const { return bos_; }
  int sep_img() const { return sep_img_; }
  int sep_txt() const { return sep_txt_; }
  int eos() const { return eos_; }
  int pad() const { return pad_; }

  bool is_image_id(int id) const { return id >= 0 && id < image_end(); }
  bool is_text_id(int id) const { return id >= text_begin() && id < text_end_; }

  int image_id(world::Cell cell) const { return cell.code; }
  world::Cell cell_from_id(int id) const;

  // Throws OutOfVocab for words outside the grammar.
  std::vector<int> encode_text(std::string_view text) const;
  std::string decode_text(const std::vector<int>& ids) const;

  // Content-addressed identity; stable across runs and processes.
  const std::string& hash() const { return hash_; }

  std::string to_json() const;

 private:
  int height_ = 0, width_ = 0;
  std::vector<std::string> words_;
  int text_end_ = 0, bos_ = 0, sep_img_ = 0, sep_txt_ = 0, eos_ = 0, pad_ = 0;
  int size_ = 0;
  std::string hash_;
};

enum class TaskMode : uint8_t { World = 0, Dynamics = 1 };
const char* task_mode_name(TaskMode m);

struct TokenSequence {
  std::vector<int> ids;
  std::vector<uint8_t> completion_mask;  // 1 exactly on the completion span
  int prompt_len = 0;
  int completion_len = 0;

  int length() const { return static_cast<int>(ids.size()); }
};

// world:    BOS  o_s  SEP_TXT  action  SEP_IMG | o_t  EOS
// dynamics: BOS  o_s  SEP_IMG  o_t     SEP_TXT | action  EOS
// The completion span (right of |) is the only trained/scored region.
TokenSequence encode_triplet(const TrajectoryTriplet& t, TaskMode mode,
                             const Vocab& vocab);

// Prompt-only encodings for sampling.
TokenSequence encode_world_prompt(const Board& source,
                                  std::string_view action_text,
                                  const Vocab& vocab);
TokenSequence encode_dynamics_prompt(const Board& source, const Board& target,
                                     const Vocab& vocab);

// Inverse of board encoding; input must be exactly H*W image-range ids.
Board decode_board(const std::vector<int>& ids, const Vocab& vocab);

// Per-cell feature vectors (one-hot over cell states), the stand-in for
// pre-quantization features of a learned image tokenizer.
struct FeatureGrid {
  int height = 0, width = 0, dim = 0;
  std::vector<double> data;  // height*width rows of `dim`

  const double* cell(int idx) const { return data.data() + static_cast<size_t>(idx) * dim; }
};

FeatureGrid feature_grid(const Board& board);

// Per-position loss weights over the target-image completion span.
struct WeightMap {
  int height = 0, width = 0;
  std::vector<double> weights;  // height*width, mean == 1

  std::string to_csv() const;
};

inline constexpr double kWeightFloorEpsilon = 0.01;

// raw[l] = ||z_s[l] - z_t[l]||^2 over feature grids; weights are
// (raw + eps*max(raw_max, 1)) normalized to mean 1. Equal boards therefore
// produce the uniform all-ones map, and every weight stays strictly positive.
WeightMap recognition_weights(const Board& source, const Board& target,
                              double eps = kWeightFloorEpsilon);

}  // namespace gridwm::codec
