#include "wattspell/data/windows.hpp"

#include "wattspell/core/error.hpp"

namespace wspl {

WindowBatch WindowBatch::gather(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw DomainError("gather of no windows");
  const std::size_t W = window_len(), N = n_appliances(), B = indices.size();
  WindowBatch out{Tensor<double>({B, W, 1}), Tensor<double>({B, N}), std::vector<std::int64_t>(B)};
  for (std::size_t i = 0; i < B; ++i) {
    const std::size_t k = indices[i];
    if (k >= size()) throw DomainError("gather index out of range");
    std::copy_n(inputs.data() + k * W, W, out.inputs.data() + i * W);
    std::copy_n(targets.data() + k * N, N, out.targets.data() + i * N);
    out.timestamps[i] = timestamps[k];
  }
  return out;
}

WindowBatch make_windows(const TimeSeries& aggregate, const std::vector<TimeSeries>& appliances, std::size_t window_len,
                         std::size_t stride) {
  if (window_len == 0 || stride == 0) throw DomainError("window length and stride must be positive");
  if (appliances.empty()) throw DomainError("make_windows needs at least one appliance series");
  const std::size_t n = aggregate.size();
  if (n < window_len) {
    throw DomainError("series of " + std::to_string(n) + " samples is shorter than the window " + std::to_string(window_len));
  }
  for (const auto& a : appliances) {
    if (a.timestamps != aggregate.timestamps) throw DomainError("appliance series are not aligned with the aggregate");
  }
  const auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (double v : aggregate.values) {
    if (!in_unit(v)) throw DomainError("make_windows expects normalized inputs in [0, 1]");
  }
  for (const auto& a : appliances) {
    for (double v : a.values) {
      if (!in_unit(v)) throw DomainError("make_windows expects normalized targets in [0, 1]");
    }
  }

  const std::size_t count = (n - window_len) / stride + 1;
  const std::size_t N = appliances.size();
  const std::size_t mid = window_midpoint(window_len);
  WindowBatch out{Tensor<double>({count, window_len, 1}), Tensor<double>({count, N}), std::vector<std::int64_t>(count)};
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t first = k * stride;
    std::copy_n(aggregate.values.begin() + static_cast<std::ptrdiff_t>(first), window_len,
                out.inputs.data() + k * window_len);
    for (std::size_t a = 0; a < N; ++a) out.targets(k, a) = appliances[a].values[first + mid];
    out.timestamps[k] = aggregate.timestamps[first + mid];
  }
  return out;
}

}  // namespace wspl
