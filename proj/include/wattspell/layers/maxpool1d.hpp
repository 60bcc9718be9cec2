#pragma once

#include <cstddef>
#include <vector>

#include "wattspell/core/error.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

struct MaxPoolCache {
  Shape input_shape;
  std::vector<std::size_t> argmax;  // flat input index per output element
};

/// Non-overlapping max over windows of `pool` samples along the last axis.
/// x is [F x T] or [B x F x T]; trailing T mod pool samples are dropped.
/// Ties resolve to the first maximal position.
template <typename Scalar>
Tensor<Scalar> maxpool1d_forward(const Tensor<Scalar>& x, std::size_t pool, MaxPoolCache* cache = nullptr) {
  if (pool == 0) throw DomainError("pool size must be positive");
  if (x.rank() != 2 && x.rank() != 3) throw ShapeError("maxpool1d input must be rank 2 or 3, got " + shape_string(x.shape()));
  const std::size_t T = x.shape().back();
  if (T < pool) throw ShapeError("maxpool1d window " + std::to_string(pool) + " exceeds length " + std::to_string(T));
  const std::size_t rows = x.size() / T;
  const std::size_t Tout = T / pool;

  Shape out_shape = x.shape();
  out_shape.back() = Tout;
  Tensor<Scalar> y(out_shape);
  std::vector<std::size_t> argmax(y.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t t = 0; t < Tout; ++t) {
      std::size_t best = r * T + t * pool;
      for (std::size_t k = 1; k < pool; ++k) {
        const std::size_t idx = r * T + t * pool + k;
        if (x[idx] > x[best]) best = idx;
      }
      y[r * Tout + t] = x[best];
      argmax[r * Tout + t] = best;
    }
  }
  if (cache) {
    cache->input_shape = x.shape();
    cache->argmax = std::move(argmax);
  }
  return y;
}

/// Routes each output gradient to its argmax input position.
template <typename Scalar>
Tensor<Scalar> maxpool1d_backward(const Tensor<Scalar>& grad_out, const MaxPoolCache& cache) {
  if (grad_out.size() != cache.argmax.size()) throw ShapeError("maxpool1d_backward gradient size mismatch");
  Tensor<Scalar> dx(cache.input_shape);
  for (std::size_t i = 0; i < cache.argmax.size(); ++i) dx[cache.argmax[i]] += grad_out[i];
  return dx;
}

}  // namespace wspl
