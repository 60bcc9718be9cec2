#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wattspell/data/windows.hpp"
#include "wattspell/model/config.hpp"
#include "wattspell/model/params.hpp"

namespace wspl {

struct TrainReport {
  std::vector<double> train_loss;     // mean squared error over the epoch's training windows
  std::vector<double> val_loss;       // inference-mode MSE over the validation set
  std::vector<double> epoch_seconds;  // wall clock per epoch
  std::vector<double> ms_per_step;    // wall clock per optimizer step, averaged per epoch
  double infer_ms_per_window = 0.0;   // from the last validation pass

  std::size_t epochs() const { return train_loss.size(); }
};

struct FitOptions {
  /// Worker threads for the per-batch forward/backward fan-out. Results do
  /// not depend on this value.
  std::size_t threads = 1;
  /// Windows per work unit. Gradients are reduced in unit order, so this
  /// (not `threads`) fixes the floating-point summation order.
  std::size_t chunk = 16;
  /// Epoch e trains on windows k with k % epoch_stride == e % epoch_stride,
  /// so overlapping windows are thinned without fixing one phase; 1 uses all.
  std::size_t epoch_stride = 1;
  std::function<void(std::size_t epoch, const TrainReport&)> on_epoch;
};

struct FitResult {
  ModelParams params;
  TrainReport report;
};

/// Initializes from config.seed and runs exactly config.epochs epochs of
/// shuffled minibatch Adam on MSE. Raises DomainError on empty data and
/// TrainingError (naming the epoch) when the loss or a gradient diverges.
FitResult fit(const WindowBatch& train, const WindowBatch& val, const ModelConfig& config, const FitOptions& options = {});

/// As fit(), starting from the given parameters.
FitResult fit_from(ModelParams params, const WindowBatch& train, const WindowBatch& val, const ModelConfig& config,
                   const FitOptions& options = {});

/// Inference-mode estimates [B x N] for inputs [B x W x 1].
TensorD predict(const TensorD& inputs, const ModelParams& params, const ModelConfig& config, std::size_t threads = 1,
                std::size_t chunk = 64);

}  // namespace wspl
