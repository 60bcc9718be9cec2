#include "wattspell/model/params.hpp"

#include <cmath>

namespace wspl {

namespace {

void fill_uniform(TensorD& t, std::size_t fan_in, SeededRng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (auto& v : t.values()) v = -bound + 2.0 * bound * rng.uniform();
}

void init_lstm(LstmParams<double>& p, SeededRng& rng) {
  const std::size_t H = p.hidden();
  fill_uniform(p.w_input, p.input_size(), rng);
  fill_uniform(p.w_recurrent, H, rng);
  p.bias.fill(0.0);
  for (std::size_t k = H; k < 2 * H; ++k) p.bias[k] = 1.0;
}

template <typename Params, typename Fn>
void visit(Params& p, Fn&& fn) {
  fn("conv.kernels", p.conv.kernels);
  fn("conv.bias", p.conv.bias);
  for (std::size_t l = 0; l < p.bilstm.size(); ++l) {
    const std::string base = "bilstm" + std::to_string(l + 1);
    auto& layer = p.bilstm[l];
    fn(base + ".fwd.w_input", layer.fwd.w_input);
    fn(base + ".fwd.w_recurrent", layer.fwd.w_recurrent);
    fn(base + ".fwd.bias", layer.fwd.bias);
    fn(base + ".bwd.w_input", layer.bwd.w_input);
    fn(base + ".bwd.w_recurrent", layer.bwd.w_recurrent);
    fn(base + ".bwd.bias", layer.bwd.bias);
  }
  fn("attention.weight", p.attention.weight);
  fn("attention.bias", p.attention.bias);
  fn("attention.score", p.attention.score);
  fn("dense.weight", p.dense.weight);
  fn("dense.bias", p.dense.bias);
}

}  // namespace

ModelParams ModelParams::zeros(const ModelConfig& config) {
  config.validate();
  const std::size_t H = config.hidden;
  ModelParams p;
  p.conv = ConvParams<double>::zeros(config.conv_filters, 1, config.conv_kernel);
  for (std::size_t l = 0; l < config.bilstm_layers; ++l) {
    p.bilstm.push_back(BiLstmParams<double>::zeros(l == 0 ? config.conv_filters : 2 * H, H));
  }
  p.attention = AttentionParams<double>::zeros(2 * H, config.attention_width);
  p.dense = DenseParams<double>::zeros(2 * H, config.n_appliances);
  return p;
}

ModelParams ModelParams::initialize(const ModelConfig& config, SeededRng& rng) {
  ModelParams p = zeros(config);
  fill_uniform(p.conv.kernels, p.conv.channels() * p.conv.kernel_len(), rng);
  for (auto& layer : p.bilstm) {
    init_lstm(layer.fwd, rng);
    init_lstm(layer.bwd, rng);
  }
  fill_uniform(p.attention.weight, p.attention.input_size(), rng);
  fill_uniform(p.attention.score, p.attention.width(), rng);
  fill_uniform(p.dense.weight, p.dense.input_size(), rng);
  return p;
}

void ModelParams::for_each(const std::function<void(const std::string&, TensorD&)>& fn) { visit(*this, fn); }

void ModelParams::for_each(const std::function<void(const std::string&, const TensorD&)>& fn) const {
  visit(*this, fn);
}

std::vector<std::string> ModelParams::names() const {
  std::vector<std::string> out;
  for_each([&](const std::string& name, const TensorD&) { out.push_back(name); });
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for_each([&](const std::string&, const TensorD& t) { n += t.size(); });
  return n;
}

ModelParams& ModelParams::operator+=(const ModelParams& other) {
  std::vector<const TensorD*> rhs;
  other.for_each([&](const std::string&, const TensorD& t) { rhs.push_back(&t); });
  std::size_t i = 0;
  for_each([&](const std::string& name, TensorD& t) {
    if (i >= rhs.size() || rhs[i]->shape() != t.shape()) throw ShapeError("parameter block " + name + " shape mismatch");
    t.vec() += rhs[i]->vec();
    ++i;
  });
  return *this;
}

ModelParams& ModelParams::operator*=(double scale) {
  for_each([&](const std::string&, TensorD& t) { t.vec() *= scale; });
  return *this;
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  std::vector<const TensorD*> lhs, rhs;
  a.for_each([&](const std::string&, const TensorD& t) { lhs.push_back(&t); });
  b.for_each([&](const std::string&, const TensorD& t) { rhs.push_back(&t); });
  if (lhs.size() != rhs.size()) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    if (!(*lhs[i] == *rhs[i])) return false;
  }
  return true;
}

}  // namespace wspl
