#include "wattspell/verify/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "wattspell/core/rng.hpp"
#include "wattspell/layers/attention.hpp"
#include "wattspell/layers/bilstm.hpp"
#include "wattspell/layers/conv1d.hpp"
#include "wattspell/layers/dense.hpp"
#include "wattspell/layers/dropout.hpp"
#include "wattspell/layers/layout.hpp"
#include "wattspell/layers/maxpool1d.hpp"
#include "wattspell/model/model.hpp"

namespace wspl {

namespace {

using T = Tensor<double>;

double project(const T& out, const T& w) { return out.vec().dot(w.vec()); }

T uniform(SeededRng& rng, Shape shape, double lo = -1.0, double hi = 1.0) {
  return rng_uniform<double>(rng, std::move(shape), lo, hi);
}

std::size_t between(SeededRng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

class Checker {
 public:
  Checker(GradCheckEntry& entry, double step) : entry_(entry), step_(step) {}

  /// Perturbs each element of `x` in place and compares the central
  /// difference of `loss` with `analytic`.
  template <typename Scalar>
  void compare(Tensor<Scalar>& x, const T& analytic, const std::function<Scalar()>& loss) {
    if (x.size() != analytic.size()) throw ShapeError("gradcheck: analytic gradient size differs from its tensor");
    const auto h = static_cast<Scalar>(step_);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Scalar orig = x[i];
      x[i] = orig + h;
      const Scalar up = loss();
      x[i] = orig - h;
      const Scalar down = loss();
      x[i] = orig;
      const auto numeric = static_cast<double>((up - down) / (2 * h));
      entry_.max_rel_error = std::max(entry_.max_rel_error, relative_error(analytic[i], numeric));
      ++entry_.checked;
    }
  }

 private:
  GradCheckEntry& entry_;
  double step_;
};

void check_conv(SeededRng& rng, Checker& ck) {
  const std::size_t B = 2, C = between(rng, 1, 2), L = between(rng, 2, 3), F = between(rng, 1, 3);
  const std::size_t Tn = between(rng, L + 1, 8), stride = between(rng, 1, 2);
  ConvParams<double> p{uniform(rng, {F, C, L}), uniform(rng, {F}, -0.5, 0.5)};
  T x, w;
  ConvCache<double> cache;
  // Resample until no pre-activation sits near the relu kink.
  for (int attempt = 0; attempt < 100; ++attempt) {
    x = uniform(rng, {B, C, Tn});
    conv1d_forward(x, p, stride, &cache);
    const auto pre = cache.pre_activation.values();
    if (std::all_of(pre.begin(), pre.end(), [](double v) { return std::abs(v) > 1e-3; })) break;
  }
  const T y = conv1d_forward(x, p, stride, &cache);
  w = uniform(rng, y.shape());
  const ConvGrads<double> g = conv1d_backward(w, cache, p);
  const std::function<double()> loss = [&] { return project(conv1d_forward(x, p, stride), w); };
  ck.compare(x, g.input, loss);
  ck.compare(p.kernels, g.params.kernels, loss);
  ck.compare(p.bias, g.params.bias, loss);
}

void check_maxpool(SeededRng& rng, Checker& ck) {
  const std::size_t B = 2, C = 2, pool = between(rng, 2, 3), Tn = between(rng, pool, 8);
  T x;
  // Every window keeps a clear winner so perturbations cannot move the argmax.
  for (int attempt = 0; attempt < 100; ++attempt) {
    x = uniform(rng, {B, C, Tn});
    bool separated = true;
    for (std::size_t r = 0; r < B * C && separated; ++r) {
      for (std::size_t o = 0; o + pool <= Tn && separated; o += pool) {
        std::vector<double> win(pool);
        for (std::size_t k = 0; k < pool; ++k) win[k] = x[r * Tn + o + k];
        std::sort(win.begin(), win.end());
        separated = win[pool - 1] - win[pool - 2] > 1e-3;
      }
    }
    if (separated) break;
  }
  MaxPoolCache cache;
  const T y = maxpool1d_forward(x, pool, &cache);
  const T w = uniform(rng, y.shape());
  const T gx = maxpool1d_backward(w, cache);
  ck.compare<double>(x, gx, [&] { return project(maxpool1d_forward(x, pool), w); });
}

LstmParams<double> random_lstm(SeededRng& rng, std::size_t D, std::size_t H) {
  return {uniform(rng, {4 * H, D}), uniform(rng, {4 * H, H}), uniform(rng, {4 * H}, -0.5, 0.5)};
}

void check_params(Checker& ck, LstmParams<double>& p, const LstmParams<double>& g, const std::function<double()>& loss) {
  ck.compare(p.w_input, g.w_input, loss);
  ck.compare(p.w_recurrent, g.w_recurrent, loss);
  ck.compare(p.bias, g.bias, loss);
}

void check_lstm_cell(SeededRng& rng, Checker& ck) {
  const std::size_t B = 2, D = between(rng, 1, 3), H = between(rng, 1, 4);
  LstmParams<double> p = random_lstm(rng, D, H);
  T x = uniform(rng, {B, D});
  LstmState<double> prev{uniform(rng, {B, H}), uniform(rng, {B, H})};
  const LstmState<double> wg{uniform(rng, {B, H}), uniform(rng, {B, H})};
  const LstmCellGrads<double> g = lstm_cell_backward(wg, x, prev, p);
  const std::function<double()> loss = [&] {
    const LstmState<double> s = lstm_cell_step(x, prev, p);
    return project(s.h, wg.h) + project(s.c, wg.c);
  };
  ck.compare(x, g.input, loss);
  ck.compare(prev.h, g.prev.h, loss);
  ck.compare(prev.c, g.prev.c, loss);
  check_params(ck, p, g.params, loss);
}

void check_lstm_sequence(SeededRng& rng, Checker& ck, bool reverse) {
  const std::size_t Tn = between(rng, 2, 8), B = 2, D = between(rng, 1, 3), H = between(rng, 1, 4);
  LstmParams<double> p = random_lstm(rng, D, H);
  T x = uniform(rng, {Tn, B, D});
  LstmCache<double> cache;
  const T y = lstm_sequence_forward(x, p, reverse, &cache);
  const T w = uniform(rng, y.shape());
  const LstmGrads<double> g = lstm_sequence_backward(w, cache, p);
  const std::function<double()> loss = [&] { return project(lstm_sequence_forward(x, p, reverse), w); };
  ck.compare(x, g.input, loss);
  check_params(ck, p, g.params, loss);
}

void check_bilstm(SeededRng& rng, Checker& ck) {
  const std::size_t Tn = between(rng, 2, 8), B = 2, D = between(rng, 1, 3), H = between(rng, 1, 4);
  BiLstmParams<double> p{random_lstm(rng, D, H), random_lstm(rng, D, H)};
  T x = uniform(rng, {Tn, B, D});
  BiLstmCache<double> cache;
  const T y = bilstm_forward(x, p, &cache);
  const T w = uniform(rng, y.shape());
  const BiLstmGrads<double> g = bilstm_backward(w, cache, p);
  const std::function<double()> loss = [&] { return project(bilstm_forward(x, p), w); };
  ck.compare(x, g.input, loss);
  check_params(ck, p.fwd, g.params.fwd, loss);
  check_params(ck, p.bwd, g.params.bwd, loss);
}

void check_attention(SeededRng& rng, Checker& ck) {
  const std::size_t Tn = between(rng, 2, 8), B = 2, I = 2 * between(rng, 1, 4), A = between(rng, 2, 6);
  AttentionParams<double> p{uniform(rng, {A, I}), uniform(rng, {A}, -0.5, 0.5), uniform(rng, {A})};
  T h = uniform(rng, {Tn, B, I});
  AttentionCache<double> cache;
  const AttentionOutput<double> out = attention_forward(h, p, &cache);
  const T w = uniform(rng, out.context.shape());
  const AttentionGrads<double> g = attention_backward(w, cache, p);
  const std::function<double()> loss = [&] { return project(attention_forward(h, p).context, w); };
  ck.compare(h, g.input, loss);
  ck.compare(p.weight, g.params.weight, loss);
  ck.compare(p.bias, g.params.bias, loss);
  ck.compare(p.score, g.params.score, loss);
}

void check_dense(SeededRng& rng, Checker& ck) {
  const std::size_t B = between(rng, 1, 3), I = between(rng, 1, 6), O = between(rng, 1, 3);
  DenseParams<double> p{uniform(rng, {O, I}), uniform(rng, {O})};
  T c = uniform(rng, {B, I});
  const T w = uniform(rng, {B, O});
  const DenseGrads<double> g = dense_backward(w, c, p);
  const std::function<double()> loss = [&] { return project(dense_forward(c, p), w); };
  ck.compare(c, g.input, loss);
  ck.compare(p.weight, g.params.weight, loss);
  ck.compare(p.bias, g.params.bias, loss);
}

void check_dropout(SeededRng& rng, Checker& ck) {
  const Shape shape{between(rng, 1, 8), 2, between(rng, 1, 8)};
  T x = uniform(rng, shape);
  const T mask = dropout_mask<double>(shape, 0.25, rng);
  const T w = uniform(rng, shape);
  const T gx = dropout_backward(w, mask);
  ck.compare<double>(x, gx, [&] { return project(dropout_apply(x, mask), w); });
}

ModelConfig tiny_config() {
  ModelConfig c;
  c.window_len = 12;
  c.n_appliances = 2;
  c.conv_filters = 2;
  c.conv_kernel = 3;
  c.pool = 2;
  c.hidden = 3;
  c.attention_width = 6;
  c.dropout = 0.0;
  return c;
}

// The model check differences an extended-precision copy of the network.
// Deep blocks of the tiny model carry gradients near 1e-8, where double
// rounding alone would swamp a 1e-5 central difference.
using LD = long double;

Tensor<LD> widen(const T& t) {
  Tensor<LD> out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i];
  return out;
}

struct WideParams {
  ConvParams<LD> conv;
  std::vector<BiLstmParams<LD>> bilstm;
  AttentionParams<LD> attention;
  DenseParams<LD> dense;

  explicit WideParams(const ModelParams& p)
      : conv{widen(p.conv.kernels), widen(p.conv.bias)},
        attention{widen(p.attention.weight), widen(p.attention.bias), widen(p.attention.score)},
        dense{widen(p.dense.weight), widen(p.dense.bias)} {
    const auto lstm = [](const LstmParams<double>& l) {
      return LstmParams<LD>{widen(l.w_input), widen(l.w_recurrent), widen(l.bias)};
    };
    for (const auto& b : p.bilstm) bilstm.push_back({lstm(b.fwd), lstm(b.bwd)});
  }

  /// Same order as ModelParams::for_each.
  std::vector<Tensor<LD>*> blocks() {
    std::vector<Tensor<LD>*> out = {&conv.kernels, &conv.bias};
    for (auto& b : bilstm) {
      for (auto* l : {&b.fwd, &b.bwd}) {
        out.push_back(&l->w_input);
        out.push_back(&l->w_recurrent);
        out.push_back(&l->bias);
      }
    }
    for (auto* t : {&attention.weight, &attention.bias, &attention.score, &dense.weight, &dense.bias}) out.push_back(t);
    return out;
  }
};

Tensor<LD> wide_forward(const Tensor<LD>& x, const WideParams& p, const ModelConfig& cfg) {
  const std::size_t B = x.dim(0);
  Tensor<LD> seq = to_time_major(maxpool1d_forward(conv1d_forward(x.reshaped({B, 1, cfg.window_len}), p.conv, cfg.conv_stride), cfg.pool));
  for (const auto& layer : p.bilstm) seq = bilstm_forward(seq, layer);
  return dense_forward(attention_forward(seq, p.attention).context, p.dense);
}

}  // namespace

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

std::vector<GradCheckEntry> gradient_check_layers(const GradCheckOptions& options) {
  using Fn = std::function<void(SeededRng&, Checker&)>;
  const std::vector<std::pair<std::string, Fn>> ops = {
      {"conv1d", check_conv},
      {"maxpool1d", check_maxpool},
      {"lstm_cell", check_lstm_cell},
      {"lstm_forward", [](SeededRng& r, Checker& c) { check_lstm_sequence(r, c, false); }},
      {"lstm_reverse", [](SeededRng& r, Checker& c) { check_lstm_sequence(r, c, true); }},
      {"bilstm", check_bilstm},
      {"attention", check_attention},
      {"dense", check_dense},
      {"dropout", check_dropout},
  };
  std::vector<GradCheckEntry> out;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    GradCheckEntry entry{ops[k].first};
    Checker ck(entry, options.step);
    for (std::size_t s = 0; s < options.seeds; ++s) {
      SeededRng rng(options.base_seed + 1000 * k + s);
      ops[k].second(rng, ck);
    }
    out.push_back(entry);
  }
  return out;
}

GradCheckEntry gradient_check_model(const GradCheckOptions& options) {
  const ModelConfig cfg = tiny_config();
  GradCheckEntry entry{"model"};
  Checker ck(entry, options.step);
  for (std::size_t s = 0; s < options.seeds; ++s) {
    SeededRng rng(options.base_seed + 77777 + s);
    ModelParams params = ModelParams::initialize(cfg, rng);
    // Nonzero biases so every block carries a gradient worth checking.
    params.for_each([&](const std::string&, TensorD& t) {
      for (auto& v : t.values()) v += rng.uniform(-0.3, 0.3);
    });
    const TensorD x = uniform(rng, {2, cfg.window_len, 1}, 0.0, 1.0);
    const TensorD w = uniform(rng, {2, cfg.n_appliances});
    SeededRng unused(0);
    ModelCache cache;
    model_forward(x, params, cfg, Mode::Train, unused, &cache);
    ModelParams grads = model_backward(w, cache, params);

    WideParams wide(params);
    const Tensor<LD> wx = widen(x), ww = widen(w);
    const T y = model_forward(x, params, cfg, Mode::Infer, unused).y;
    const Tensor<LD> wy = wide_forward(wx, wide, cfg);
    for (std::size_t k = 0; k < y.size(); ++k) {
      if (std::abs(static_cast<double>(wy[k]) - y[k]) > 1e-12) {
        throw Error("gradcheck: extended-precision network disagrees with model_forward");
      }
    }
    const std::function<LD()> loss = [&] { return wide_forward(wx, wide, cfg).vec().dot(ww.vec()); };

    std::vector<TensorD*> analytic;
    grads.for_each([&](const std::string&, TensorD& t) { analytic.push_back(&t); });
    const std::vector<Tensor<LD>*> blocks = wide.blocks();
    if (blocks.size() != analytic.size()) throw Error("gradcheck: parameter block count mismatch");
    for (std::size_t i = 0; i < blocks.size(); ++i) ck.compare(*blocks[i], *analytic[i], loss);
  }
  return entry;
}

std::vector<GradCheckEntry> gradient_check_all(const GradCheckOptions& options) {
  std::vector<GradCheckEntry> out = gradient_check_layers(options);
  out.push_back(gradient_check_model(options));
  return out;
}

}  // namespace wspl
