#pragma once

#include "wattspell/core/error.hpp"
#include "wattspell/core/rng.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

struct DropoutSpec {
  double rate = 0.25;
  bool training = false;
};

/// Inverted dropout mask: 1/(1-rate) where kept, 0 where dropped.
template <typename Scalar>
Tensor<Scalar> dropout_mask(const Shape& shape, double rate, SeededRng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw DomainError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  Tensor<Scalar> mask(shape);
  const Scalar keep = Scalar(1) / Scalar(1.0 - rate);
  for (auto& m : mask.values()) m = rng.uniform() >= rate ? keep : Scalar(0);
  return mask;
}

/// Training mode multiplies by a fresh mask (returned through mask_out when
/// given); inference returns the input unchanged. A zero rate draws nothing.
template <typename Scalar>
Tensor<Scalar> dropout_forward(const Tensor<Scalar>& x, const DropoutSpec& spec, SeededRng& rng,
                               Tensor<Scalar>* mask_out = nullptr) {
  if (!(spec.rate >= 0.0 && spec.rate < 1.0)) throw DomainError("dropout rate must lie in [0, 1), got " + std::to_string(spec.rate));
  if (!spec.training || spec.rate == 0.0) {
    if (mask_out) *mask_out = Tensor<Scalar>();
    return x;
  }
  Tensor<Scalar> mask = dropout_mask<Scalar>(x.shape(), spec.rate, rng);
  Tensor<Scalar> y = x;
  y.vec().array() *= mask.vec().array();
  if (mask_out) *mask_out = std::move(mask);
  return y;
}

/// Applies a fixed mask; an empty mask is the identity.
template <typename Scalar>
Tensor<Scalar> dropout_apply(const Tensor<Scalar>& x, const Tensor<Scalar>& mask) {
  if (mask.empty()) return x;
  if (mask.size() != x.size()) throw ShapeError("dropout mask " + shape_string(mask.shape()) + " does not match " + shape_string(x.shape()));
  Tensor<Scalar> y = x;
  y.vec().array() *= mask.vec().array();
  return y;
}

template <typename Scalar>
Tensor<Scalar> dropout_backward(const Tensor<Scalar>& grad_out, const Tensor<Scalar>& mask) {
  return dropout_apply(grad_out, mask);
}

}  // namespace wspl
