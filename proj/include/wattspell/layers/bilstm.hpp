#pragma once

#include "wattspell/layers/lstm.hpp"

namespace wspl {

/// Independent forward-direction and backward-direction LSTMs.
template <typename Scalar>
struct BiLstmParams {
  LstmParams<Scalar> fwd;
  LstmParams<Scalar> bwd;

  static BiLstmParams zeros(std::size_t input_size, std::size_t hidden) {
    return {LstmParams<Scalar>::zeros(input_size, hidden), LstmParams<Scalar>::zeros(input_size, hidden)};
  }

  std::size_t hidden() const { return fwd.hidden(); }
  std::size_t input_size() const { return fwd.input_size(); }
};

template <typename Scalar>
struct BiLstmCache {
  LstmCache<Scalar> fwd;
  LstmCache<Scalar> bwd;
  bool batched = true;
};

template <typename Scalar>
struct BiLstmGrads {
  Tensor<Scalar> input;
  BiLstmParams<Scalar> params;
};

/// x is [T x D] or [T x B x D]. Row t of the result is the forward hidden
/// state at t followed by the backward hidden state at t, both directions
/// starting from zero state.
template <typename Scalar>
Tensor<Scalar> bilstm_forward(const Tensor<Scalar>& x, const BiLstmParams<Scalar>& p,
                              BiLstmCache<Scalar>* cache = nullptr) {
  if (x.empty()) throw DomainError("bilstm_forward of an empty sequence");
  if (p.fwd.hidden() != p.bwd.hidden() || p.fwd.input_size() != p.bwd.input_size()) {
    throw ShapeError("bilstm directions disagree on sizes");
  }
  const bool batched = x.rank() == 3;
  if (x.rank() != 2 && !batched) throw ShapeError("bilstm input must be [T x D] or [T x B x D], got " + shape_string(x.shape()));
  const std::size_t T = x.dim(0), B = batched ? x.dim(1) : 1, D = x.shape().back(), H = p.hidden();
  const Tensor<Scalar> seq = batched ? x : x.reshaped({T, 1, D});

  LstmCache<Scalar>* fc = cache ? &cache->fwd : nullptr;
  LstmCache<Scalar>* bc = cache ? &cache->bwd : nullptr;
  const Tensor<Scalar> hf = lstm_sequence_forward(seq, p.fwd, false, fc);
  const Tensor<Scalar> hb = lstm_sequence_forward(seq, p.bwd, true, bc);

  Tensor<Scalar> out({T, B, 2 * H});
  const auto Hi = static_cast<Eigen::Index>(H);
  auto o = out.matrix(T * B, 2 * H);
  o.leftCols(Hi) = hf.matrix(T * B, H);
  o.rightCols(Hi) = hb.matrix(T * B, H);
  if (cache) cache->batched = batched;
  if (!batched) out.reshape({T, 2 * H});
  return out;
}

template <typename Scalar>
BiLstmGrads<Scalar> bilstm_backward(const Tensor<Scalar>& grad_out, const BiLstmCache<Scalar>& cache,
                                    const BiLstmParams<Scalar>& p) {
  const std::size_t T = cache.fwd.input.dim(0), B = cache.fwd.input.dim(1), H = p.hidden();
  if (grad_out.size() != T * B * 2 * H) throw ShapeError("bilstm backward gradient " + shape_string(grad_out.shape()) + " size mismatch");
  const auto Hi = static_cast<Eigen::Index>(H);
  const auto g = grad_out.matrix(T * B, 2 * H);
  Tensor<Scalar> gf({T, B, H}), gb({T, B, H});
  gf.matrix(T * B, H) = g.leftCols(Hi);
  gb.matrix(T * B, H) = g.rightCols(Hi);

  LstmGrads<Scalar> df = lstm_sequence_backward(gf, cache.fwd, p.fwd);
  LstmGrads<Scalar> db = lstm_sequence_backward(gb, cache.bwd, p.bwd);
  BiLstmGrads<Scalar> out{std::move(df.input), {std::move(df.params), std::move(db.params)}};
  out.input.vec() += db.input.vec();
  if (!cache.batched) out.input.reshape({T, cache.fwd.input.dim(2)});
  return out;
}

}  // namespace wspl
