#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "wattspell/core/error.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

enum class Activation { Tanh, Sigmoid, Relu };

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  // Split by sign so exp never overflows.
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// Array forms for the recurrent and attention kernels. Both go through exp,
/// which Eigen vectorizes for double; std::tanh does not.
template <typename Derived>
auto sigmoid_array(const Eigen::ArrayBase<Derived>& x) {
  using S = typename Derived::Scalar;
  return (S(1) + (-x).exp()).inverse();
}

template <typename Derived>
auto tanh_array(const Eigen::ArrayBase<Derived>& x) {
  using S = typename Derived::Scalar;
  return S(2) * (S(1) + (S(-2) * x).exp()).inverse() - S(1);
}

template <typename Scalar>
Scalar relu(Scalar x) {
  return x > Scalar(0) ? x : Scalar(0);
}

template <typename Scalar>
Scalar activate(Activation f, Scalar x) {
  switch (f) {
    case Activation::Tanh:
      return std::tanh(x);
    case Activation::Sigmoid:
      return sigmoid(x);
    case Activation::Relu:
      return relu(x);
  }
  return x;
}

template <typename Scalar>
bool all_finite(std::span<const Scalar> values) {
  return std::all_of(values.begin(), values.end(), [](Scalar v) { return std::isfinite(v); });
}

template <typename Scalar>
bool all_finite(const Tensor<Scalar>& t) {
  return all_finite<Scalar>(t.values());
}

/// Standard matrix product a[MxK] * b[KxN].
template <typename Scalar>
Tensor<Scalar> matmul(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw ShapeError("matmul shape mismatch: " + shape_string(a.shape()) + " x " + shape_string(b.shape()));
  }
  Tensor<Scalar> out({a.dim(0), b.dim(1)});
  out.matrix().noalias() = a.matrix() * b.matrix();
  return out;
}

/// Applies f to every element; non-finite input is rejected.
template <typename Scalar>
Tensor<Scalar> elementwise(const Tensor<Scalar>& x, Activation f) {
  if (!all_finite(x)) throw DomainError("elementwise: non-finite input");
  Tensor<Scalar> out = x;
  for (auto& v : out.values()) v = activate(f, v);
  return out;
}

/// Max-subtracted softmax over a flat span; writes into out (same length).
template <typename Scalar>
void softmax_into(std::span<const Scalar> e, std::span<Scalar> out) {
  if (e.empty()) throw DomainError("softmax of an empty vector");
  const Scalar peak = *std::max_element(e.begin(), e.end());
  Scalar total = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    out[i] = std::exp(e[i] - peak);
    total += out[i];
  }
  for (auto& v : out) v /= total;
}

template <typename Scalar>
Tensor<Scalar> softmax(const Tensor<Scalar>& e) {
  if (e.empty()) throw DomainError("softmax of an empty vector");
  if (!all_finite(e)) throw DomainError("softmax: non-finite input");
  Tensor<Scalar> out({e.size()});
  softmax_into<Scalar>(e.values(), out.values());
  return out;
}

}  // namespace wspl
