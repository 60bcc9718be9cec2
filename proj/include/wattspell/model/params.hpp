#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wattspell/core/rng.hpp"
#include "wattspell/core/tensor.hpp"
#include "wattspell/layers/attention.hpp"
#include "wattspell/layers/bilstm.hpp"
#include "wattspell/layers/conv1d.hpp"
#include "wattspell/layers/dense.hpp"
#include "wattspell/model/config.hpp"

namespace wspl {

using TensorD = Tensor<double>;

/// Every trainable array of the network, in a fixed order:
/// conv, bilstm1..k, attention, dense.
struct ModelParams {
  ConvParams<double> conv;
  std::vector<BiLstmParams<double>> bilstm;
  AttentionParams<double> attention;
  DenseParams<double> dense;

  /// All-zero parameters with the shapes implied by `config`.
  static ModelParams zeros(const ModelConfig& config);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases, LSTM
  /// forget-gate biases set to 1.
  static ModelParams initialize(const ModelConfig& config, SeededRng& rng);

  /// Visits (name, tensor) pairs in checkpoint order, e.g.
  /// "conv.kernels", "bilstm1.fwd.w_input", "dense.bias".
  void for_each(const std::function<void(const std::string&, TensorD&)>& fn);
  void for_each(const std::function<void(const std::string&, const TensorD&)>& fn) const;

  std::vector<std::string> names() const;
  std::size_t parameter_count() const;

  /// Elementwise this += other (shapes must match).
  ModelParams& operator+=(const ModelParams& other);
  ModelParams& operator*=(double scale);

  friend bool operator==(const ModelParams& a, const ModelParams& b);
};

}  // namespace wspl
