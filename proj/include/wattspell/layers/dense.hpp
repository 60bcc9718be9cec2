#pragma once

#include "wattspell/core/error.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

/// Affine regression head y = W c + b.
template <typename Scalar>
struct DenseParams {
  Tensor<Scalar> weight;  // [O x I]
  Tensor<Scalar> bias;    // [O]

  static DenseParams zeros(std::size_t input_size, std::size_t outputs) {
    return {Tensor<Scalar>({outputs, input_size}), Tensor<Scalar>({outputs})};
  }

  std::size_t outputs() const { return weight.dim(0); }
  std::size_t input_size() const { return weight.dim(1); }
};

template <typename Scalar>
struct DenseGrads {
  Tensor<Scalar> input;
  DenseParams<Scalar> params;
};

/// c is [I] or [B x I]; no output nonlinearity.
template <typename Scalar>
Tensor<Scalar> dense_forward(const Tensor<Scalar>& c, const DenseParams<Scalar>& p) {
  if (p.weight.rank() != 2 || p.bias.rank() != 1 || p.bias.dim(0) != p.weight.dim(0)) {
    throw ShapeError("dense params malformed: W " + shape_string(p.weight.shape()) + ", b " + shape_string(p.bias.shape()));
  }
  const bool batched = c.rank() == 2;
  if ((c.rank() != 1 && !batched) || c.shape().back() != p.input_size()) {
    throw ShapeError("dense input " + shape_string(c.shape()) + " does not match W " + shape_string(p.weight.shape()));
  }
  const std::size_t B = batched ? c.dim(0) : 1;
  Tensor<Scalar> y(batched ? Shape{B, p.outputs()} : Shape{p.outputs()});
  auto ym = y.matrix(B, p.outputs());
  ym.noalias() = c.matrix(B, p.input_size()) * p.weight.matrix().transpose();
  ym.rowwise() += p.bias.vec().transpose();
  return y;
}

template <typename Scalar>
DenseGrads<Scalar> dense_backward(const Tensor<Scalar>& grad_out, const Tensor<Scalar>& input, const DenseParams<Scalar>& p) {
  const std::size_t O = p.outputs(), I = p.input_size();
  const std::size_t B = input.size() / I;
  if (grad_out.size() != B * O) throw ShapeError("dense backward gradient " + shape_string(grad_out.shape()) + " size mismatch");
  DenseGrads<Scalar> g{Tensor<Scalar>(input.shape()), DenseParams<Scalar>::zeros(I, O)};
  const auto dy = grad_out.matrix(B, O);
  g.params.weight.matrix().noalias() = dy.transpose() * input.matrix(B, I);
  g.params.bias.vec() = dy.colwise().sum().transpose();
  g.input.matrix(B, I).noalias() = dy * p.weight.matrix();
  return g;
}

}  // namespace wspl
