#pragma once

#include <cmath>
#include <span>

#include "wattspell/core/error.hpp"
#include "wattspell/core/ops.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

/// Additive attention: energy e_t = v . tanh(W h_t + b), weights softmax(e).
template <typename Scalar>
struct AttentionParams {
  Tensor<Scalar> weight;  // [A x 2H]
  Tensor<Scalar> bias;    // [A]
  Tensor<Scalar> score;   // [A]

  static AttentionParams zeros(std::size_t input_size, std::size_t width) {
    return {Tensor<Scalar>({width, input_size}), Tensor<Scalar>({width}), Tensor<Scalar>({width})};
  }

  std::size_t width() const { return weight.dim(0); }
  std::size_t input_size() const { return weight.dim(1); }

  void validate() const {
    const bool ok = weight.rank() == 2 && bias.rank() == 1 && score.rank() == 1 && bias.dim(0) == weight.dim(0) &&
                    score.dim(0) == weight.dim(0);
    if (!ok) {
      throw ShapeError("attention params malformed: W " + shape_string(weight.shape()) + ", b " +
                       shape_string(bias.shape()) + ", v " + shape_string(score.shape()));
    }
  }
};

template <typename Scalar>
struct AttentionOutput {
  Tensor<Scalar> context;  // [2H] or [B x 2H]
  Tensor<Scalar> alpha;    // [T] or [B x T]
};

template <typename Scalar>
struct AttentionCache {
  Tensor<Scalar> input;      // [T x B x 2H]
  RowMatrix<Scalar> hidden;  // [(T*B) x A], tanh(W h + b)
  Tensor<Scalar> alpha;      // [B x T]
  bool batched = true;
};

template <typename Scalar>
struct AttentionGrads {
  Tensor<Scalar> input;
  AttentionParams<Scalar> params;
};

/// h is [T x 2H] or [T x B x 2H]. Returns the alpha-weighted sum of the
/// rows of h and the weights themselves.
template <typename Scalar>
AttentionOutput<Scalar> attention_forward(const Tensor<Scalar>& h, const AttentionParams<Scalar>& p,
                                          AttentionCache<Scalar>* cache = nullptr) {
  p.validate();
  if (h.empty()) throw DomainError("attention over an empty sequence");
  const bool batched = h.rank() == 3;
  if ((h.rank() != 2 && !batched) || h.shape().back() != p.input_size()) {
    throw ShapeError("attention input " + shape_string(h.shape()) + " does not match W " + shape_string(p.weight.shape()));
  }
  const std::size_t T = h.dim(0), B = batched ? h.dim(1) : 1, I = p.input_size();
  const auto hm = h.matrix(T * B, I);

  RowMatrix<Scalar> u = hm * p.weight.matrix().transpose();
  u.rowwise() += p.bias.vec().transpose();
  u = tanh_array(u.array()).matrix();
  const ColVector<Scalar> energy = u * p.score.vec();

  Tensor<Scalar> alpha({B, T});
  std::vector<Scalar> e(T), a(T);
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t t = 0; t < T; ++t) e[t] = energy(static_cast<Eigen::Index>(t * B + b));
    softmax_into<Scalar>(e, a);
    for (std::size_t t = 0; t < T; ++t) alpha(b, t) = a[t];
  }

  Tensor<Scalar> context({B, I});
  auto c = context.matrix();
  for (std::size_t t = 0; t < T; ++t) {
    const auto ht = hm.middleRows(static_cast<Eigen::Index>(t * B), static_cast<Eigen::Index>(B));
    for (std::size_t b = 0; b < B; ++b) c.row(b) += alpha(b, t) * ht.row(b);
  }

  if (cache) {
    cache->input = batched ? h : h.reshaped({T, 1, I});
    cache->hidden = std::move(u);
    cache->alpha = alpha;
    cache->batched = batched;
  }
  if (!batched) {
    context.reshape({I});
    alpha.reshape({T});
  }
  return {std::move(context), std::move(alpha)};
}

/// Gradients given dL/dcontext.
template <typename Scalar>
AttentionGrads<Scalar> attention_backward(const Tensor<Scalar>& grad_context, const AttentionCache<Scalar>& cache,
                                          const AttentionParams<Scalar>& p) {
  const std::size_t T = cache.input.dim(0), B = cache.input.dim(1), I = cache.input.dim(2), A = p.width();
  if (grad_context.size() != B * I) throw ShapeError("attention backward gradient " + shape_string(grad_context.shape()) + " size mismatch");
  const auto hm = cache.input.matrix(T * B, I);
  const auto dc = grad_context.matrix(B, I);
  const auto Bi = static_cast<Eigen::Index>(B);

  AttentionGrads<Scalar> g{Tensor<Scalar>({T, B, I}), AttentionParams<Scalar>::zeros(I, A)};
  auto dh = g.input.matrix(T * B, I);

  // dL/dalpha, then through the softmax to dL/de.
  ColVector<Scalar> de(static_cast<Eigen::Index>(T * B));
  for (std::size_t b = 0; b < B; ++b) {
    Scalar weighted = 0;
    std::vector<Scalar> dalpha(T);
    for (std::size_t t = 0; t < T; ++t) {
      dalpha[t] = dc.row(b).dot(hm.row(static_cast<Eigen::Index>(t * B + b)));
      weighted += cache.alpha(b, t) * dalpha[t];
    }
    for (std::size_t t = 0; t < T; ++t) {
      de(static_cast<Eigen::Index>(t * B + b)) = cache.alpha(b, t) * (dalpha[t] - weighted);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    auto rows = dh.middleRows(static_cast<Eigen::Index>(t * B), Bi);
    for (std::size_t b = 0; b < B; ++b) rows.row(b) = cache.alpha(b, t) * dc.row(b);
  }

  const auto& u = cache.hidden;
  g.params.score.vec().noalias() = u.transpose() * de;
  const RowMatrix<Scalar> dpre =
      ((de * p.score.vec().transpose()).array() * (Scalar(1) - u.array().square())).matrix();
  g.params.weight.matrix().noalias() = dpre.transpose() * hm;
  g.params.bias.vec() = dpre.colwise().sum().transpose();
  dh.noalias() += dpre * p.weight.matrix();

  if (!cache.batched) g.input.reshape({T, I});
  return g;
}

}  // namespace wspl
