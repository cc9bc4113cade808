#pragma once

// Decoder-only transformer with hand-derived backpropagation. The whole core
// is templated on the scalar type: float for production training/inference,
// double for finite-difference gradient verification.

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gridwm/codec.hpp"
#include "gridwm/errors.hpp"
#include "gridwm/rng.hpp"

namespace gridwm::model {

enum class Precision : uint8_t { Standard = 0, GradcheckHighPrecision = 1 };
enum class LossMode : uint8_t { Standard = 0, RecognitionWeighted = 1 };

struct ModelConfig {
  int d_model = 64;
  int n_layers = 2;
  int n_heads = 2;
  int context_length = 160;
  int vocab_size = 0;
  Precision precision = Precision::Standard;

  void validate() const {
    if (d_model <= 0 || n_layers <= 0 || n_heads <= 0 || vocab_size <= 0)
      throw ConfigInvalid("model: non-positive dimension");
    if (d_model % n_heads != 0)
      throw ConfigInvalid("model: d_model must divide evenly into heads");
    if (context_length <= 1) throw ConfigInvalid("model: context too short");
  }
};

struct ParamEntry {
  std::string name;   // e.g. "layer0.w_qkv"
  std::string group;  // embedding | layernorm | attention | mlp | head
  size_t offset = 0;
  int rows = 0, cols = 0;
  size_t count() const { return static_cast<size_t>(rows) * cols; }
};

struct ParamLayout {
  std::vector<ParamEntry> entries;
  size_t total = 0;

  static ParamLayout build(const ModelConfig& cfg) {
    ParamLayout pl;
    const int d = cfg.d_model, v = cfg.vocab_size, c = cfg.context_length;
    const int h = 4 * d;
    auto add = [&](const std::string& name, const std::string& group, int r,
                   int col) {
      pl.entries.push_back({name, group, pl.total, r, col});
      pl.total += static_cast<size_t>(r) * col;
    };
    add("tok_emb", "embedding", v, d);
    add("pos_emb", "embedding", c, d);
    for (int l = 0; l < cfg.n_layers; ++l) {
      const std::string p = "layer" + std::to_string(l) + ".";
      add(p + "ln1_g", "layernorm", 1, d);
      add(p + "ln1_b", "layernorm", 1, d);
      add(p + "w_qkv", "attention", d, 3 * d);
      add(p + "b_qkv", "attention", 1, 3 * d);
      add(p + "w_o", "attention", d, d);
      add(p + "b_o", "attention", 1, d);
      add(p + "ln2_g", "layernorm", 1, d);
      add(p + "ln2_b", "layernorm", 1, d);
      add(p + "w_fc", "mlp", d, h);
      add(p + "b_fc", "mlp", 1, h);
      add(p + "w_proj", "mlp", h, d);
      add(p + "b_proj", "mlp", 1, d);
    }
    add("lnf_g", "layernorm", 1, d);
    add("lnf_b", "layernorm", 1, d);
    add("w_head", "head", d, v);
    add("b_head", "head", 1, v);
    return pl;
  }

  const ParamEntry& find(std::string_view name) const {
    for (const auto& e : entries)
      if (e.name == name) return e;
    throw ShapeMismatch("no such parameter: " + std::string(name));
  }
};

template <class S>
class Net {
 public:
  using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using RowX = Eigen::Matrix<S, 1, Eigen::Dynamic>;
  using MapM = Eigen::Map<MatX>;
  using CMapM = Eigen::Map<const MatX>;

  explicit Net(const ModelConfig& cfg)
      : cfg_(cfg), layout_(ParamLayout::build(cfg)) {
    cfg_.validate();
    params_.assign(layout_.total, S(0));
  }

  const ModelConfig& config() const { return cfg_; }
  const ParamLayout& layout() const { return layout_; }
  std::vector<S>& params() { return params_; }
  const std::vector<S>& params() const { return params_; }

  void init_params(uint64_t seed) {
    Rng rng(seed);
    const double std_dev = 0.02;
    for (const auto& e : layout_.entries) {
      S* p = params_.data() + e.offset;
      const bool is_gain = e.name.size() >= 2 &&
                           e.name.compare(e.name.size() - 2, 2, "_g") == 0;
      const bool is_bias =
          (e.name.compare(e.name.size() - 2, 2, "_b") == 0 && e.rows == 1) ||
          e.name.find("b_") != std::string::npos;
      if (is_gain) {
        for (size_t i = 0; i < e.count(); ++i) p[i] = S(1);
      } else if (is_bias) {
        for (size_t i = 0; i < e.count(); ++i) p[i] = S(0);
      } else {
        for (size_t i = 0; i < e.count(); ++i)
          p[i] = static_cast<S>(rng.next_gaussian() * std_dev);
      }
    }
  }

  // --- forward -----------------------------------------------------------

  struct LNCache {
    MatX xhat;
    Eigen::Matrix<S, Eigen::Dynamic, 1> rstd;
  };

  struct BlockCache {
    MatX x_in;               // residual stream entering the block
    LNCache ln1c;
    MatX ln1;                // normalized input to attention
    MatX qkv;                // T x 3d
    std::vector<MatX> att;   // per head, T x T softmax rows
    MatX ctx;                // T x d concatenated head outputs
    MatX x_mid;              // after attention residual
    LNCache ln2c;
    MatX ln2;
    MatX fc_pre;             // T x 4d
    MatX fc_act;             // T x 4d
  };

  struct FwdCache {
    std::vector<int> ids;
    int T = 0;
    std::vector<BlockCache> blocks;
    MatX x_final;
    LNCache lnfc;
    MatX lnf;
    MatX logits;  // T x V
  };

  void forward(const std::vector<int>& ids, FwdCache& cache) const {
    const int T = static_cast<int>(ids.size());
    if (T < 2) throw ShapeMismatch("forward: sequence too short");
    if (T > cfg_.context_length)
      throw ShapeMismatch("forward: sequence exceeds context length");
    for (int id : ids)
      if (id < 0 || id >= cfg_.vocab_size)
        throw InvalidTokenId("forward: token id outside vocab");

    const int d = cfg_.d_model;
    cache.ids = ids;
    cache.T = T;
    cache.blocks.resize(static_cast<size_t>(cfg_.n_layers));

    CMapM tok = cview("tok_emb");
    CMapM pos = cview("pos_emb");
    MatX x(T, d);
    for (int t = 0; t < T; ++t) x.row(t) = tok.row(ids[t]) + pos.row(t);

    for (int l = 0; l < cfg_.n_layers; ++l) {
      BlockCache& bc = cache.blocks[static_cast<size_t>(l)];
      const std::string p = "layer" + std::to_string(l) + ".";
      bc.x_in = x;

      bc.ln1 = layer_norm(bc.x_in, cview(p + "ln1_g"), cview(p + "ln1_b"),
                          bc.ln1c);
      bc.qkv.resize(T, 3 * d);
      bc.qkv.noalias() = bc.ln1 * cview(p + "w_qkv");
      bc.qkv.rowwise() += cview(p + "b_qkv").row(0);
      attention_forward(bc);
      MatX att_out(T, d);
      att_out.noalias() = bc.ctx * cview(p + "w_o");
      att_out.rowwise() += cview(p + "b_o").row(0);
      bc.x_mid = bc.x_in + att_out;

      bc.ln2 = layer_norm(bc.x_mid, cview(p + "ln2_g"), cview(p + "ln2_b"),
                          bc.ln2c);
      bc.fc_pre.resize(T, 4 * d);
      bc.fc_pre.noalias() = bc.ln2 * cview(p + "w_fc");
      bc.fc_pre.rowwise() += cview(p + "b_fc").row(0);
      bc.fc_act = gelu(bc.fc_pre);
      MatX mlp_out(T, d);
      mlp_out.noalias() = bc.fc_act * cview(p + "w_proj");
      mlp_out.rowwise() += cview(p + "b_proj").row(0);
      x = bc.x_mid + mlp_out;
    }

    cache.x_final = x;
    cache.lnf = layer_norm(cache.x_final, cview("lnf_g"), cview("lnf_b"),
                           cache.lnfc);
    cache.logits.resize(T, cfg_.vocab_size);
    cache.logits.noalias() = cache.lnf * cview("w_head");
    cache.logits.rowwise() += cview("b_head").row(0);
  }

  // Log-softmax of row `t` of the logits, computed in double.
  static std::vector<double> log_softmax_row(const MatX& logits, int t) {
    const int v = static_cast<int>(logits.cols());
    std::vector<double> out(static_cast<size_t>(v));
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < v; ++i)
      mx = std::max(mx, static_cast<double>(logits(t, i)));
    double z = 0.0;
    for (int i = 0; i < v; ++i)
      z += std::exp(static_cast<double>(logits(t, i)) - mx);
    const double log_z = std::log(z) + mx;
    for (int i = 0; i < v; ++i)
      out[static_cast<size_t>(i)] = static_cast<double>(logits(t, i)) - log_z;
    return out;
  }

  // Weighted completion cross-entropy. Position p is trained when
  // mask[p+1] != 0: the logits at p predict ids[p+1]. Returns the weighted
  // nll sum; `count` gets the number of trained positions.
  double loss_from_cache(const FwdCache& cache,
                         const std::vector<uint8_t>& mask,
                         const std::vector<S>& pos_weights,
                         int* count = nullptr) const {
    check_mask(cache, mask, pos_weights);
    double total = 0.0;
    int n = 0;
    for (int p = 0; p + 1 < cache.T; ++p) {
      if (!mask[static_cast<size_t>(p + 1)]) continue;
      const auto ls = log_softmax_row(cache.logits, p);
      const double w = static_cast<double>(pos_weights[static_cast<size_t>(p + 1)]);
      total += w * (-ls[static_cast<size_t>(cache.ids[static_cast<size_t>(p + 1)])]);
      ++n;
    }
    if (count) *count = n;
    return total;
  }

  // Backprop of (sum_p scale * w_p * nll_p) into `grads` (accumulated).
  void backward(const FwdCache& cache, const std::vector<uint8_t>& mask,
                const std::vector<S>& pos_weights, double scale,
                std::vector<S>& grads) const {
    check_mask(cache, mask, pos_weights);
    if (grads.size() != layout_.total)
      throw ShapeMismatch("backward: gradient buffer size mismatch");
    const int T = cache.T, d = cfg_.d_model, v = cfg_.vocab_size;

    MatX dlogits = MatX::Zero(T, v);
    for (int p = 0; p + 1 < T; ++p) {
      if (!mask[static_cast<size_t>(p + 1)]) continue;
      const auto ls = log_softmax_row(cache.logits, p);
      const double w =
          scale * static_cast<double>(pos_weights[static_cast<size_t>(p + 1)]);
      const int target = cache.ids[static_cast<size_t>(p + 1)];
      for (int i = 0; i < v; ++i)
        dlogits(p, i) = static_cast<S>(w * std::exp(ls[static_cast<size_t>(i)]));
      dlogits(p, target) -= static_cast<S>(w);
    }

    // head
    gview(grads, "w_head").noalias() += cache.lnf.transpose() * dlogits;
    gview(grads, "b_head").row(0) += dlogits.colwise().sum();
    MatX dx(T, d);
    dx.noalias() = dlogits * cview("w_head").transpose();

    dx = layer_norm_backward(dx, cache.lnfc, cview("lnf_g"),
                             gview(grads, "lnf_g"), gview(grads, "lnf_b"));

    for (int l = cfg_.n_layers - 1; l >= 0; --l) {
      const BlockCache& bc = cache.blocks[static_cast<size_t>(l)];
      const std::string p = "layer" + std::to_string(l) + ".";

      // MLP
      gview(grads, p + "w_proj").noalias() += bc.fc_act.transpose() * dx;
      gview(grads, p + "b_proj").row(0) += dx.colwise().sum();
      MatX d_act(T, 4 * d);
      d_act.noalias() = dx * cview(p + "w_proj").transpose();
      MatX d_pre = gelu_backward(bc.fc_pre, d_act);
      gview(grads, p + "w_fc").noalias() += bc.ln2.transpose() * d_pre;
      gview(grads, p + "b_fc").row(0) += d_pre.colwise().sum();
      MatX d_ln2(T, d);
      d_ln2.noalias() = d_pre * cview(p + "w_fc").transpose();
      MatX d_mid = dx + layer_norm_backward(d_ln2, bc.ln2c, cview(p + "ln2_g"),
                                            gview(grads, p + "ln2_g"),
                                            gview(grads, p + "ln2_b"));

      // attention
      gview(grads, p + "w_o").noalias() += bc.ctx.transpose() * d_mid;
      gview(grads, p + "b_o").row(0) += d_mid.colwise().sum();
      MatX d_ctx(T, d);
      d_ctx.noalias() = d_mid * cview(p + "w_o").transpose();
      MatX d_qkv = attention_backward(bc, d_ctx);
      gview(grads, p + "w_qkv").noalias() += bc.ln1.transpose() * d_qkv;
      gview(grads, p + "b_qkv").row(0) += d_qkv.colwise().sum();
      MatX d_ln1(T, d);
      d_ln1.noalias() = d_qkv * cview(p + "w_qkv").transpose();
      dx = d_mid + layer_norm_backward(d_ln1, bc.ln1c, cview(p + "ln1_g"),
                                       gview(grads, p + "ln1_g"),
                                       gview(grads, p + "ln1_b"));
    }

    MapM d_tok = gview(grads, "tok_emb");
    MapM d_pos = gview(grads, "pos_emb");
    for (int t = 0; t < T; ++t) {
      d_tok.row(cache.ids[static_cast<size_t>(t)]) += dx.row(t);
      d_pos.row(t) += dx.row(t);
    }
  }

  // --- incremental decoding ---------------------------------------------

  struct DecodeState {
    int cur = 0;
    std::vector<MatX> k;  // per layer, context_length x d
    std::vector<MatX> v;
  };

  DecodeState make_decode_state() const {
    DecodeState st;
    st.k.assign(static_cast<size_t>(cfg_.n_layers),
                MatX::Zero(cfg_.context_length, cfg_.d_model));
    st.v.assign(static_cast<size_t>(cfg_.n_layers),
                MatX::Zero(cfg_.context_length, cfg_.d_model));
    return st;
  }

  // Feeds one token, returns the logits row for the next position.
  RowX decode_step(DecodeState& st, int id) const {
    if (st.cur >= cfg_.context_length)
      throw ShapeMismatch("decode: context length exceeded");
    if (id < 0 || id >= cfg_.vocab_size)
      throw InvalidTokenId("decode: token id outside vocab");
    const int d = cfg_.d_model, nh = cfg_.n_heads, hd = d / nh;
    const S inv_sqrt_hd = S(1) / static_cast<S>(std::sqrt(double(hd)));
    const int t = st.cur;

    RowX x = cview("tok_emb").row(id) + cview("pos_emb").row(t);
    for (int l = 0; l < cfg_.n_layers; ++l) {
      const std::string p = "layer" + std::to_string(l) + ".";
      RowX h = layer_norm_row(x, cview(p + "ln1_g"), cview(p + "ln1_b"));
      RowX qkv = h * cview(p + "w_qkv");
      qkv += cview(p + "b_qkv").row(0);
      st.k[static_cast<size_t>(l)].row(t) = qkv.segment(d, d);
      st.v[static_cast<size_t>(l)].row(t) = qkv.segment(2 * d, d);

      RowX ctx(d);
      for (int head = 0; head < nh; ++head) {
        const int off = head * hd;
        auto q = qkv.segment(off, hd);
        auto keys = st.k[static_cast<size_t>(l)].block(0, off, t + 1, hd);
        auto vals = st.v[static_cast<size_t>(l)].block(0, off, t + 1, hd);
        Eigen::Matrix<S, Eigen::Dynamic, 1> scores = keys * q.transpose();
        scores *= inv_sqrt_hd;
        const S mx = scores.maxCoeff();
        scores = (scores.array() - mx).exp();
        scores /= scores.sum();
        ctx.segment(off, hd) = scores.transpose() * vals;
      }
      RowX att_out = ctx * cview(p + "w_o");
      att_out += cview(p + "b_o").row(0);
      x += att_out;

      RowX h2 = layer_norm_row(x, cview(p + "ln2_g"), cview(p + "ln2_b"));
      RowX pre = h2 * cview(p + "w_fc");
      pre += cview(p + "b_fc").row(0);
      RowX act = gelu(pre);
      RowX mlp_out = act * cview(p + "w_proj");
      mlp_out += cview(p + "b_proj").row(0);
      x += mlp_out;
    }
    RowX lnf = layer_norm_row(x, cview("lnf_g"), cview("lnf_b"));
    RowX logits = lnf * cview("w_head");
    logits += cview("b_head").row(0);
    st.cur = t + 1;
    return logits;
  }

 private:
  static constexpr double kLnEps = 1e-5;

  ModelConfig cfg_;
  ParamLayout layout_;
  std::vector<S> params_;

  CMapM cview(std::string_view name) const {
    const ParamEntry& e = layout_.find(name);
    return CMapM(params_.data() + e.offset, e.rows, e.cols);
  }
  MapM gview(std::vector<S>& buf, std::string_view name) const {
    const ParamEntry& e = layout_.find(name);
    return MapM(buf.data() + e.offset, e.rows, e.cols);
  }

  void check_mask(const FwdCache& cache, const std::vector<uint8_t>& mask,
                  const std::vector<S>& pos_weights) const {
    if (static_cast<int>(mask.size()) != cache.T ||
        static_cast<int>(pos_weights.size()) != cache.T)
      throw ShapeMismatch("mask/weights do not align with the sequence");
  }

  static MatX gelu(const MatX& x) {
    constexpr double c = 0.7978845608028654;  // sqrt(2/pi)
    constexpr double a = 0.044715;
    return x.unaryExpr([](S v) {
      const double xv = static_cast<double>(v);
      return static_cast<S>(0.5 * xv *
                            (1.0 + std::tanh(c * (xv + a * xv * xv * xv))));
    });
  }

  static MatX gelu_backward(const MatX& x, const MatX& dy) {
    constexpr double c = 0.7978845608028654;
    constexpr double a = 0.044715;
    MatX dx(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double xv = static_cast<double>(x(i));
      const double u = c * (xv + a * xv * xv * xv);
      const double th = std::tanh(u);
      const double g = 0.5 * (1.0 + th) +
                       0.5 * xv * (1.0 - th * th) * c * (1.0 + 3.0 * a * xv * xv);
      dx(i) = static_cast<S>(static_cast<double>(dy(i)) * g);
    }
    return dx;
  }

  MatX layer_norm(const MatX& x, CMapM g, CMapM b, LNCache& cache) const {
    const int T = static_cast<int>(x.rows()), d = static_cast<int>(x.cols());
    cache.xhat.resize(T, d);
    cache.rstd.resize(T);
    MatX y(T, d);
    for (int t = 0; t < T; ++t) {
      const S mu = x.row(t).mean();
      const S var = (x.row(t).array() - mu).square().sum() / S(d);
      const S rstd = S(1) / std::sqrt(var + static_cast<S>(kLnEps));
      cache.rstd(t) = rstd;
      cache.xhat.row(t) = (x.row(t).array() - mu) * rstd;
      y.row(t) =
          cache.xhat.row(t).array() * g.row(0).array() + b.row(0).array();
    }
    return y;
  }

  RowX layer_norm_row(const RowX& x, CMapM g, CMapM b) const {
    const int d = static_cast<int>(x.cols());
    const S mu = x.mean();
    const S var = (x.array() - mu).square().sum() / S(d);
    const S rstd = S(1) / std::sqrt(var + static_cast<S>(kLnEps));
    RowX y = ((x.array() - mu) * rstd) * g.row(0).array() + b.row(0).array();
    return y;
  }

  MatX layer_norm_backward(const MatX& dy, const LNCache& cache, CMapM g,
                           MapM dg, MapM db) const {
    const int T = static_cast<int>(dy.rows()), d = static_cast<int>(dy.cols());
    MatX dx(T, d);
    for (int t = 0; t < T; ++t) {
      const auto xhat = cache.xhat.row(t).array();
      const auto dyr = dy.row(t).array();
      dg.row(0).array() += dyr * xhat;
      db.row(0).array() += dyr;
      const auto dxhat = dyr * g.row(0).array();
      const S m1 = dxhat.mean();
      const S m2 = (dxhat * xhat).mean();
      dx.row(t) = ((dxhat - m1 - xhat * m2) * cache.rstd(t)).matrix();
    }
    return dx;
  }

  void attention_forward(BlockCache& bc) const {
    const int T = static_cast<int>(bc.qkv.rows());
    const int d = cfg_.d_model, nh = cfg_.n_heads, hd = d / nh;
    const S inv_sqrt_hd = S(1) / static_cast<S>(std::sqrt(double(hd)));
    bc.att.assign(static_cast<size_t>(nh), MatX());
    bc.ctx.resize(T, d);
    for (int head = 0; head < nh; ++head) {
      const int off = head * hd;
      auto q = bc.qkv.block(0, off, T, hd);
      auto k = bc.qkv.block(0, d + off, T, hd);
      auto v = bc.qkv.block(0, 2 * d + off, T, hd);
      MatX scores(T, T);
      scores.noalias() = q * k.transpose();
      scores *= inv_sqrt_hd;
      MatX& att = bc.att[static_cast<size_t>(head)];
      att = MatX::Zero(T, T);
      for (int t = 0; t < T; ++t) {
        const S mx = scores.row(t).head(t + 1).maxCoeff();
        S z = S(0);
        for (int j = 0; j <= t; ++j) {
          const S e = std::exp(scores(t, j) - mx);
          att(t, j) = e;
          z += e;
        }
        att.row(t).head(t + 1) /= z;
      }
      bc.ctx.block(0, off, T, hd).noalias() = att * v;
    }
  }

  // Returns d qkv (T x 3d).
  MatX attention_backward(const BlockCache& bc, const MatX& d_ctx) const {
    const int T = static_cast<int>(bc.qkv.rows());
    const int d = cfg_.d_model, nh = cfg_.n_heads, hd = d / nh;
    const S inv_sqrt_hd = S(1) / static_cast<S>(std::sqrt(double(hd)));
    MatX d_qkv = MatX::Zero(T, 3 * d);
    for (int head = 0; head < nh; ++head) {
      const int off = head * hd;
      auto q = bc.qkv.block(0, off, T, hd);
      auto k = bc.qkv.block(0, d + off, T, hd);
      auto v = bc.qkv.block(0, 2 * d + off, T, hd);
      const MatX& att = bc.att[static_cast<size_t>(head)];
      auto d_ctx_h = d_ctx.block(0, off, T, hd);

      MatX d_att(T, T);
      d_att.noalias() = d_ctx_h * v.transpose();
      d_qkv.block(0, 2 * d + off, T, hd).noalias() = att.transpose() * d_ctx_h;

      // softmax rows (causal: entries past t are zero in att)
      MatX d_scores = MatX::Zero(T, T);
      for (int t = 0; t < T; ++t) {
        S dot = S(0);
        for (int j = 0; j <= t; ++j) dot += d_att(t, j) * att(t, j);
        for (int j = 0; j <= t; ++j)
          d_scores(t, j) = att(t, j) * (d_att(t, j) - dot) * inv_sqrt_hd;
      }
      d_qkv.block(0, off, T, hd).noalias() = d_scores * k;
      d_qkv.block(0, d + off, T, hd).noalias() = d_scores.transpose() * q;
    }
    return d_qkv;
  }
};

}  // namespace gridwm::model
