#pragma once

#include <vector>

#include "wattspell/core/rng.hpp"
#include "wattspell/layers/attention.hpp"
#include "wattspell/layers/bilstm.hpp"
#include "wattspell/layers/conv1d.hpp"
#include "wattspell/layers/maxpool1d.hpp"
#include "wattspell/model/config.hpp"
#include "wattspell/model/params.hpp"

namespace wspl {

enum class Mode { Train, Infer };

struct ForwardResult {
  TensorD y;      // [N] for one window, [B x N] for a batch
  TensorD alpha;  // [T'] or [B x T']
};

/// Intermediate values kept by a training-mode forward pass.
struct ModelCache {
  ConvCache<double> conv;
  MaxPoolCache pool;
  std::vector<BiLstmCache<double>> bilstm;
  std::vector<TensorD> dropout_masks;
  AttentionCache<double> attention;
  TensorD context;  // [B x 2H]
  bool batched = true;
};

/// conv -> relu -> max-pool -> (BiLSTM -> dropout) x k -> attention -> dense.
///
/// x is one window [W x 1] or a batch [B x W x 1]. The output estimates the
/// normalized power of each appliance at the window midpoint. Dropout is
/// active only in Mode::Train and draws its masks from `rng`.
ForwardResult model_forward(const TensorD& x, const ModelParams& params, const ModelConfig& config, Mode mode,
                            SeededRng& rng, ModelCache* cache = nullptr);

/// Parameter gradients of a scalar loss given dL/dy.
ModelParams model_backward(const TensorD& grad_y, const ModelCache& cache, const ModelParams& params);

/// Mean of squared differences over all elements.
double mse_loss(const TensorD& y_hat, const TensorD& y);

/// dL/dy_hat of mse_loss.
TensorD mse_grad(const TensorD& y_hat, const TensorD& y);

}  // namespace wspl
