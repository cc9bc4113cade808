#include "gridwm/codec.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gridwm/hash.hpp"
#include "gridwm/io.hpp"

namespace gridwm::codec {

using nlohmann::json;

Vocab Vocab::build(int board_height, int board_width) {
  if (board_height < 2 || board_height > 10 || board_width < 2 ||
      board_width > 10)
    throw ConfigInvalid("vocab: board dims must be in [2,10] (single-digit coordinates)");
  Vocab v;
  v.height_ = board_height;
  v.width_ = board_width;
  v.words_ = {"move", "paint",  "remove", "add",    "the",      "a",
              "at",   "row",    "col",    "red",    "green",    "blue",
              "yellow", "square", "circle", "triangle", "left",  "right",
              "up",   "down",   "0",      "1",      "2",        "3",
              "4",    "5",      "6",      "7",      "8",        "9"};
  v.text_end_ = v.text_begin() + static_cast<int>(v.words_.size());
  v.bos_ = v.text_end_;
  v.sep_img_ = v.bos_ + 1;
  v.sep_txt_ = v.bos_ + 2;
  v.eos_ = v.bos_ + 3;
  v.pad_ = v.bos_ + 4;
  v.size_ = v.pad_ + 1;

  Hasher h;
  h.update("gridwm-vocab-v1");
  h.update_value(v.height_);
  h.update_value(v.width_);
  for (const auto& w : v.words_) {
    h.update(w);
    h.update("|");
  }
  v.hash_ = h.hex();
  return v;
}

world::Cell Vocab::cell_from_id(int id) const {
  if (!is_image_id(id))
    throw InvalidTokenId("token id " + std::to_string(id) +
                         " is not an image id");
  return world::Cell{static_cast<uint8_t>(id)};
}

std::vector<int> Vocab::encode_text(std::string_view text) const {
  std::vector<int> ids;
  std::string cur;
  const auto flush = [&] {
    if (cur.empty()) return;
    const auto it = std::find(words_.begin(), words_.end(), cur);
    if (it == words_.end())
      throw OutOfVocab("word not in grammar vocabulary: " + cur);
    ids.push_back(text_begin() + static_cast<int>(it - words_.begin()));
    cur.clear();
  };
  for (char c : text) {
    if (c == ' ')
      flush();
    else
      cur += c;
  }
  flush();
  return ids;
}

std::string Vocab::decode_text(const std::vector<int>& ids) const {
  std::string out;
  for (int id : ids) {
    if (!is_text_id(id))
      throw InvalidTokenId("token id " + std::to_string(id) +
                           " is not a text id");
    if (!out.empty()) out += ' ';
    out += words_[static_cast<size_t>(id - text_begin())];
  }
  return out;
}

std::string Vocab::to_json() const {
  json j;
  j["board_height"] = height_;
  j["board_width"] = width_;
  j["image_ids"] = {image_begin(), image_end()};
  j["words"] = words_;
  j["specials"] = {{"bos", bos_},      {"sep_img", sep_img_},
                   {"sep_txt", sep_txt_}, {"eos", eos_},
                   {"pad", pad_}};
  j["size"] = size_;
  j["hash"] = hash_;
  return j.dump(2);
}

const char* task_mode_name(TaskMode m) {
  return m == TaskMode::World ? "world" : "dynamics";
}

namespace {

void append_board(std::vector<int>& ids, const Board& b, const Vocab& v) {
  for (const auto& cell : b.cells) ids.push_back(v.image_id(cell));
}

void check_board_dims(const Board& b, const Vocab& v) {
  if (b.height != v.board_height() || b.width != v.board_width())
    throw DimensionMismatch("board dims do not match vocab grid");
}

TokenSequence finish(std::vector<int> ids, int prompt_len) {
  TokenSequence seq;
  seq.prompt_len = prompt_len;
  seq.completion_len = static_cast<int>(ids.size()) - prompt_len;
  seq.completion_mask.assign(ids.size(), 0);
  for (size_t i = static_cast<size_t>(prompt_len); i < ids.size(); ++i)
    seq.completion_mask[i] = 1;
  seq.ids = std::move(ids);
  return seq;
}

}  // namespace

TokenSequence encode_world_prompt(const Board& source,
                                  std::string_view action_text,
                                  const Vocab& vocab) {
  check_board_dims(source, vocab);
  std::vector<int> ids;
  ids.push_back(vocab.bos());
  append_board(ids, source, vocab);
  ids.push_back(vocab.sep_txt());
  for (int id : vocab.encode_text(action_text)) ids.push_back(id);
  ids.push_back(vocab.sep_img());
  const int prompt_len = static_cast<int>(ids.size());
  return finish(std::move(ids), prompt_len);
}

TokenSequence encode_dynamics_prompt(const Board& source, const Board& target,
                                     const Vocab& vocab) {
  check_board_dims(source, vocab);
  check_board_dims(target, vocab);
  std::vector<int> ids;
  ids.push_back(vocab.bos());
  append_board(ids, source, vocab);
  ids.push_back(vocab.sep_img());
  append_board(ids, target, vocab);
  ids.push_back(vocab.sep_txt());
  const int prompt_len = static_cast<int>(ids.size());
  return finish(std::move(ids), prompt_len);
}

TokenSequence encode_triplet(const TrajectoryTriplet& t, TaskMode mode,
                             const Vocab& vocab) {
  if (mode == TaskMode::World) {
    TokenSequence seq = encode_world_prompt(t.source, t.surface, vocab);
    std::vector<int> ids = std::move(seq.ids);
    const int prompt_len = seq.prompt_len;
    append_board(ids, t.target, vocab);
    ids.push_back(vocab.eos());
    return finish(std::move(ids), prompt_len);
  }
  TokenSequence seq = encode_dynamics_prompt(t.source, t.target, vocab);
  std::vector<int> ids = std::move(seq.ids);
  const int prompt_len = seq.prompt_len;
  for (int id : vocab.encode_text(t.surface)) ids.push_back(id);
  ids.push_back(vocab.eos());
  return finish(std::move(ids), prompt_len);
}

Board decode_board(const std::vector<int>& ids, const Vocab& vocab) {
  const int expected = vocab.image_span();
  if (static_cast<int>(ids.size()) != expected)
    throw WrongLength("decode_board: expected " + std::to_string(expected) +
                      " ids, got " + std::to_string(ids.size()));
  Board b(vocab.board_height(), vocab.board_width());
  for (size_t i = 0; i < ids.size(); ++i) b.cells[i] = vocab.cell_from_id(ids[i]);
  return b;
}

FeatureGrid feature_grid(const Board& board) {
  FeatureGrid g;
  g.height = board.height;
  g.width = board.width;
  g.dim = world::kNumCellStates;
  g.data.assign(static_cast<size_t>(g.height) * g.width * g.dim, 0.0);
  for (size_t i = 0; i < board.cells.size(); ++i)
    g.data[i * g.dim + board.cells[i].code] = 1.0;
  return g;
}

std::string WeightMap::to_csv() const {
  std::string out;
  for (int r = 0; r < height; ++r) {
    std::vector<std::string> row;
    row.reserve(static_cast<size_t>(width));
    for (int c = 0; c < width; ++c)
      row.push_back(csv_num(weights[static_cast<size_t>(r) * width + c]));
    out += csv_row(row);
  }
  return out;
}

WeightMap recognition_weights(const Board& source, const Board& target,
                              double eps) {
  if (source.height != target.height || source.width != target.width)
    throw DimensionMismatch("recognition_weights: board dims differ");
  const FeatureGrid zs = feature_grid(source);
  const FeatureGrid zt = feature_grid(target);

  const int n = zs.height * zs.width;
  std::vector<double> raw(static_cast<size_t>(n), 0.0);
  double raw_max = 0.0;
  for (int l = 0; l < n; ++l) {
    const double* a = zs.cell(l);
    const double* b = zt.cell(l);
    double d2 = 0.0;
    for (int k = 0; k < zs.dim; ++k) {
      const double d = a[k] - b[k];
      d2 += d * d;
    }
    raw[static_cast<size_t>(l)] = d2;
    raw_max = std::max(raw_max, d2);
  }

  const double floor = eps * std::max(raw_max, 1.0);
  double mean = 0.0;
  for (double& w : raw) {
    w += floor;
    mean += w;
  }
  mean /= n;

  WeightMap map;
  map.height = zs.height;
  map.width = zs.width;
  map.weights.resize(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) map.weights[i] = raw[i] / mean;
  return map;
}

}  // namespace gridwm::codec
