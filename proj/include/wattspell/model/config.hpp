#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <json.hpp>

namespace wspl {

/// Architecture and training hyperparameters.
///
/// Defaults: one conv layer, two BiLSTM layers each followed by dropout,
/// one attention layer and one dense head, trained for 20 epochs with MSE
/// and Adam.
struct ModelConfig {
  std::size_t window_len = 64;
  std::size_t n_appliances = 1;
  std::size_t conv_filters = 16;
  std::size_t conv_kernel = 5;
  std::size_t conv_stride = 1;
  std::size_t pool = 2;
  std::size_t hidden = 64;
  std::size_t bilstm_layers = 2;
  std::size_t attention_width = 128;
  double dropout = 0.25;
  double learning_rate = 1e-3;
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  std::uint64_t seed = 42;
  double on_threshold = 0.05;

  /// Throws DomainError / ShapeError when a field is out of range or the
  /// window is too short for the conv + pool stack.
  void validate() const;

  std::size_t conv_length() const;
  /// Sequence length seen by the BiLSTM stack.
  std::size_t sequence_length() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

nlohmann::json to_json(const ModelConfig& config);

/// Applies the keys of `j` that name ModelConfig fields onto `config` and
/// erases them from `j`. Type mismatches raise DomainError naming the key.
void apply_model_keys(nlohmann::json& j, ModelConfig& config);

/// Strict parse: unknown keys are rejected.
ModelConfig model_config_from_json(const nlohmann::json& j);

/// Sorted-key compact JSON; the form embedded in checkpoints.
std::string canonical_text(const ModelConfig& config);

}  // namespace wspl
