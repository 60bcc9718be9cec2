#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wattspell/core/tensor.hpp"
#include "wattspell/data/timeseries.hpp"

namespace wspl {

/// Normalized aggregate windows with per-appliance midpoint targets.
struct WindowBatch {
  Tensor<double> inputs;   // [B x W x 1]
  Tensor<double> targets;  // [B x N]
  std::vector<std::int64_t> timestamps;  // midpoint time of each window

  std::size_t size() const { return timestamps.size(); }
  std::size_t window_len() const { return inputs.dim(1); }
  std::size_t n_appliances() const { return targets.dim(1); }

  /// Subset in the given order.
  WindowBatch gather(std::span<const std::size_t> indices) const;
};

/// Index of the target sample within a window.
inline std::size_t window_midpoint(std::size_t window_len) { return window_len / 2; }

/// Window k covers samples [k*stride, k*stride + W); its targets are the
/// appliance values at offset floor(W/2). All series must share one grid.
WindowBatch make_windows(const TimeSeries& aggregate, const std::vector<TimeSeries>& appliances, std::size_t window_len,
                         std::size_t stride = 1);

}  // namespace wspl
