#pragma once

#include <cmath>
#include <cstddef>

#include "wattspell/core/error.hpp"
#include "wattspell/core/ops.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

/// LSTM weights. Gate blocks along the 4H rows are ordered input, forget,
/// candidate, output.
template <typename Scalar>
struct LstmParams {
  Tensor<Scalar> w_input;      // [4H x D]
  Tensor<Scalar> w_recurrent;  // [4H x H]
  Tensor<Scalar> bias;         // [4H]

  static LstmParams zeros(std::size_t input_size, std::size_t hidden) {
    return {Tensor<Scalar>({4 * hidden, input_size}), Tensor<Scalar>({4 * hidden, hidden}),
            Tensor<Scalar>({4 * hidden})};
  }

  std::size_t hidden() const { return w_recurrent.dim(1); }
  std::size_t input_size() const { return w_input.dim(1); }

  void validate() const {
    const std::size_t H = w_recurrent.rank() == 2 ? w_recurrent.dim(1) : 0;
    const bool ok = H > 0 && w_recurrent.dim(0) == 4 * H && w_input.rank() == 2 && w_input.dim(0) == 4 * H &&
                    bias.rank() == 1 && bias.dim(0) == 4 * H;
    if (!ok) {
      throw ShapeError("lstm params malformed: W_x " + shape_string(w_input.shape()) + ", W_h " +
                       shape_string(w_recurrent.shape()) + ", b " + shape_string(bias.shape()));
    }
  }
};

/// Hidden and cell state, [H] for one sequence or [B x H] for a batch.
template <typename Scalar>
struct LstmState {
  Tensor<Scalar> h;
  Tensor<Scalar> c;
};

template <typename Scalar>
struct LstmCache {
  Tensor<Scalar> input;   // [T x B x D]
  Tensor<Scalar> gates;   // [T x B x 4H], post-activation
  Tensor<Scalar> cells;   // [T x B x H]
  Tensor<Scalar> hidden;  // [T x B x H]
  bool reverse = false;
};

template <typename Scalar>
struct LstmGrads {
  Tensor<Scalar> input;
  LstmParams<Scalar> params;
};

namespace detail {

/// In place: sigmoid on the i, f, o blocks and tanh on g.
template <typename Block>
void activate_gates(Block&& z, Eigen::Index H) {
  z.leftCols(2 * H) = sigmoid_array(z.leftCols(2 * H).array()).matrix();
  z.middleCols(2 * H, H) = tanh_array(z.middleCols(2 * H, H).array()).matrix();
  z.rightCols(H) = sigmoid_array(z.rightCols(H).array()).matrix();
}

}  // namespace detail

/// One LSTM step: gates from W_x x + W_h h_prev + b, then
/// c = f * c_prev + i * g and h = o * tanh(c).
template <typename Scalar>
LstmState<Scalar> lstm_cell_step(const Tensor<Scalar>& x_t, const LstmState<Scalar>& prev, const LstmParams<Scalar>& p) {
  p.validate();
  const std::size_t H = p.hidden(), D = p.input_size();
  const bool batched = x_t.rank() == 2;
  const std::size_t B = batched ? x_t.dim(0) : 1;
  const std::size_t x_dim = x_t.shape().back();
  if (x_dim != D || (x_t.rank() != 1 && !batched)) {
    throw ShapeError("lstm input " + shape_string(x_t.shape()) + " does not match W_x " + shape_string(p.w_input.shape()));
  }
  if (prev.h.size() != B * H || prev.c.size() != B * H) {
    throw ShapeError("lstm state " + shape_string(prev.h.shape()) + "/" + shape_string(prev.c.shape()) +
                     " does not match hidden size " + std::to_string(H));
  }
  const auto Hi = static_cast<Eigen::Index>(H);
  RowMatrix<Scalar> z = x_t.matrix(B, D) * p.w_input.matrix().transpose();
  z.noalias() += prev.h.matrix(B, H) * p.w_recurrent.matrix().transpose();
  z.rowwise() += p.bias.vec().transpose();
  detail::activate_gates(z, Hi);

  const Shape state_shape = batched ? Shape{B, H} : Shape{H};
  LstmState<Scalar> next{Tensor<Scalar>(state_shape), Tensor<Scalar>(state_shape)};
  auto c = next.c.matrix(B, H);
  c = z.middleCols(Hi, Hi).cwiseProduct(prev.c.matrix(B, H)) + z.leftCols(Hi).cwiseProduct(z.middleCols(2 * Hi, Hi));
  next.h.matrix(B, H) = z.rightCols(Hi).cwiseProduct(tanh_array(c.array()).matrix());
  return next;
}

template <typename Scalar>
struct LstmCellGrads {
  Tensor<Scalar> input;
  LstmState<Scalar> prev;
  LstmParams<Scalar> params;
};

/// Gradients of lstm_cell_step given dL/dh and dL/dc of the new state.
template <typename Scalar>
LstmCellGrads<Scalar> lstm_cell_backward(const LstmState<Scalar>& grad_next, const Tensor<Scalar>& x_t,
                                         const LstmState<Scalar>& prev, const LstmParams<Scalar>& p) {
  p.validate();
  const std::size_t H = p.hidden(), D = p.input_size();
  const std::size_t B = x_t.size() / D;
  const auto Hi = static_cast<Eigen::Index>(H);
  if (grad_next.h.size() != B * H || grad_next.c.size() != B * H) throw ShapeError("lstm_cell_backward gradient size mismatch");
  RowMatrix<Scalar> z = x_t.matrix(B, D) * p.w_input.matrix().transpose();
  z.noalias() += prev.h.matrix(B, H) * p.w_recurrent.matrix().transpose();
  z.rowwise() += p.bias.vec().transpose();
  detail::activate_gates(z, Hi);
  const auto in = z.leftCols(Hi).array();
  const auto fg = z.middleCols(Hi, Hi).array();
  const auto cand = z.middleCols(2 * Hi, Hi).array();
  const auto out = z.rightCols(Hi).array();
  const auto c_prev = prev.c.matrix(B, H).array();
  const RowMatrix<Scalar> c = (fg * c_prev + in * cand).matrix();
  const RowMatrix<Scalar> tc = tanh_array(c.array()).matrix();

  const auto dh = grad_next.h.matrix(B, H).array();
  const RowMatrix<Scalar> dc = (grad_next.c.matrix(B, H).array() + dh * out * (Scalar(1) - tc.array().square())).matrix();
  RowMatrix<Scalar> dz(static_cast<Eigen::Index>(B), 4 * Hi);
  dz.leftCols(Hi) = (dc.array() * cand * in * (Scalar(1) - in)).matrix();
  dz.middleCols(Hi, Hi) = (dc.array() * c_prev * fg * (Scalar(1) - fg)).matrix();
  dz.middleCols(2 * Hi, Hi) = (dc.array() * in * (Scalar(1) - cand.square())).matrix();
  dz.rightCols(Hi) = (dh * tc.array() * out * (Scalar(1) - out)).matrix();

  LstmCellGrads<Scalar> g{Tensor<Scalar>(x_t.shape()), {Tensor<Scalar>(prev.h.shape()), Tensor<Scalar>(prev.c.shape())},
                          LstmParams<Scalar>::zeros(D, H)};
  g.input.matrix(B, D).noalias() = dz * p.w_input.matrix();
  g.prev.h.matrix(B, H).noalias() = dz * p.w_recurrent.matrix();
  g.prev.c.matrix(B, H) = (dc.array() * fg).matrix();
  g.params.w_input.matrix().noalias() = dz.transpose() * x_t.matrix(B, D);
  g.params.w_recurrent.matrix().noalias() = dz.transpose() * prev.h.matrix(B, H);
  g.params.bias.vec() = dz.colwise().sum().transpose();
  return g;
}

/// Runs one direction over a [T x B x D] sequence from the zero state.
/// Returns hidden states [T x B x H] indexed by time; with reverse the
/// recurrence starts at t = T - 1 and state t depends on t + 1.
template <typename Scalar>
Tensor<Scalar> lstm_sequence_forward(const Tensor<Scalar>& x, const LstmParams<Scalar>& p, bool reverse,
                                     LstmCache<Scalar>* cache = nullptr) {
  p.validate();
  if (x.rank() != 3 || x.dim(2) != p.input_size()) {
    throw ShapeError("lstm sequence " + shape_string(x.shape()) + " does not match W_x " + shape_string(p.w_input.shape()));
  }
  const std::size_t T = x.dim(0), B = x.dim(1), D = x.dim(2), H = p.hidden();
  const auto Hi = static_cast<Eigen::Index>(H);

  Tensor<Scalar> gates({T, B, 4 * H});
  Tensor<Scalar> cells({T, B, H});
  Tensor<Scalar> hidden({T, B, H});
  auto z_all = gates.matrix(T * B, 4 * H);
  z_all.noalias() = x.matrix(T * B, D) * p.w_input.matrix().transpose();
  z_all.rowwise() += p.bias.vec().transpose();
  const auto w_h = p.w_recurrent.matrix();

  for (std::size_t s = 0; s < T; ++s) {
    const std::size_t t = reverse ? T - 1 - s : s;
    auto z = gates.slab(t);
    if (s > 0) {
      const std::size_t prev = reverse ? t + 1 : t - 1;
      z.noalias() += hidden.slab(prev) * w_h.transpose();
    }
    detail::activate_gates(z, Hi);
    auto c = cells.slab(t);
    c = z.leftCols(Hi).cwiseProduct(z.middleCols(2 * Hi, Hi));
    if (s > 0) {
      const std::size_t prev = reverse ? t + 1 : t - 1;
      c += z.middleCols(Hi, Hi).cwiseProduct(cells.slab(prev));
    }
    hidden.slab(t) = z.rightCols(Hi).cwiseProduct(tanh_array(c.array()).matrix());
  }

  if (cache) {
    cache->input = x;
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->hidden = hidden;
    cache->reverse = reverse;
  }
  return hidden;
}

/// Backpropagation through time for lstm_sequence_forward.
template <typename Scalar>
LstmGrads<Scalar> lstm_sequence_backward(const Tensor<Scalar>& grad_hidden, const LstmCache<Scalar>& cache,
                                         const LstmParams<Scalar>& p) {
  const std::size_t T = cache.input.dim(0), B = cache.input.dim(1), D = cache.input.dim(2), H = p.hidden();
  if (grad_hidden.size() != T * B * H) {
    throw ShapeError("lstm backward gradient " + shape_string(grad_hidden.shape()) + " does not match hidden " +
                     shape_string(cache.hidden.shape()));
  }
  const auto Hi = static_cast<Eigen::Index>(H);
  const auto Bi = static_cast<Eigen::Index>(B);
  const auto w_h = p.w_recurrent.matrix();

  LstmGrads<Scalar> g{Tensor<Scalar>({T, B, D}), LstmParams<Scalar>::zeros(D, H)};
  Tensor<Scalar> dz_all({T, B, 4 * H});
  auto dw_h = g.params.w_recurrent.matrix();
  RowMatrix<Scalar> dh_carry = RowMatrix<Scalar>::Zero(Bi, Hi);
  RowMatrix<Scalar> dc_carry = RowMatrix<Scalar>::Zero(Bi, Hi);
  RowMatrix<Scalar> c_prev_zero = RowMatrix<Scalar>::Zero(Bi, Hi);

  for (std::size_t s = T; s-- > 0;) {
    const std::size_t t = cache.reverse ? T - 1 - s : s;
    const std::size_t prev = cache.reverse ? t + 1 : t - 1;
    const auto gates = cache.gates.slab(t);
    const auto in = gates.leftCols(Hi).array();
    const auto fg = gates.middleCols(Hi, Hi).array();
    const auto cand = gates.middleCols(2 * Hi, Hi).array();
    const auto out = gates.rightCols(Hi).array();
    const RowMatrix<Scalar> tc = tanh_array(cache.cells.slab(t).array()).matrix();
    const auto c_prev = s > 0 ? cache.cells.slab(prev) : typename Tensor<Scalar>::ConstMatrixMap(c_prev_zero.data(), Bi, Hi);

    const RowMatrix<Scalar> dh = grad_hidden.matrix(T * B, H).middleRows(static_cast<Eigen::Index>(t * B), Bi) + dh_carry;
    const RowMatrix<Scalar> dc =
        (dh.array() * out * (Scalar(1) - tc.array().square())).matrix() + dc_carry;

    auto dz = dz_all.slab(t);
    dz.leftCols(Hi) = (dc.array() * cand * in * (Scalar(1) - in)).matrix();
    dz.middleCols(Hi, Hi) = (dc.array() * c_prev.array() * fg * (Scalar(1) - fg)).matrix();
    dz.middleCols(2 * Hi, Hi) = (dc.array() * in * (Scalar(1) - cand.square())).matrix();
    dz.rightCols(Hi) = (dh.array() * tc.array() * out * (Scalar(1) - out)).matrix();

    dc_carry = (dc.array() * fg).matrix();
    if (s > 0) dw_h.noalias() += dz.transpose() * cache.hidden.slab(prev);
    dh_carry.noalias() = dz * w_h;
  }

  const auto dz = dz_all.matrix(T * B, 4 * H);
  g.params.w_input.matrix().noalias() = dz.transpose() * cache.input.matrix(T * B, D);
  g.input.matrix(T * B, D).noalias() = dz * p.w_input.matrix();
  g.params.bias.vec() = dz.colwise().sum().transpose();
  return g;
}

}  // namespace wspl
