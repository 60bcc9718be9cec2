#pragma once

#include "wattspell/core/error.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

/// [B x F x T] channel-major batch to [T x B x F] time-major sequence.
template <typename Scalar>
Tensor<Scalar> to_time_major(const Tensor<Scalar>& x) {
  if (x.rank() != 3) throw ShapeError("to_time_major expects [B x F x T], got " + shape_string(x.shape()));
  const std::size_t B = x.dim(0), F = x.dim(1), T = x.dim(2);
  Tensor<Scalar> out({T, B, F});
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t f = 0; f < F; ++f)
      for (std::size_t t = 0; t < T; ++t) out(t, b, f) = x(b, f, t);
  return out;
}

/// Inverse of to_time_major: [T x B x F] to [B x F x T].
template <typename Scalar>
Tensor<Scalar> to_channel_major(const Tensor<Scalar>& x) {
  if (x.rank() != 3) throw ShapeError("to_channel_major expects [T x B x F], got " + shape_string(x.shape()));
  const std::size_t T = x.dim(0), B = x.dim(1), F = x.dim(2);
  Tensor<Scalar> out({B, F, T});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t b = 0; b < B; ++b)
      for (std::size_t f = 0; f < F; ++f) out(b, f, t) = x(t, b, f);
  return out;
}

}  // namespace wspl
