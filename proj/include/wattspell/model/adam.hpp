#pragma once

#include <cstdint>
#include <span>

#include "wattspell/model/params.hpp"

namespace wspl {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First and second moment estimates mirroring the parameter blocks.
struct AdamState {
  ModelParams m;
  ModelParams v;
  std::uint64_t step = 0;
  AdamOptions options;

  static AdamState for_params(const ModelParams& params, AdamOptions options = {});
};

/// Bias-corrected Adam update of one flat block at step t (t >= 1).
void adam_update(std::span<double> theta, std::span<const double> grad, std::span<double> m, std::span<double> v,
                 std::uint64_t t, const AdamOptions& options);

/// Increments the step counter then updates every block. A non-finite
/// gradient raises TrainingError naming the block before anything changes.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state);

}  // namespace wspl
