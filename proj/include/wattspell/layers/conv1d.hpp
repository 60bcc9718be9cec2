#pragma once

#include <cstddef>

#include "wattspell/core/error.hpp"
#include "wattspell/core/tensor.hpp"

namespace wspl {

/// Multi-channel 1-D filter bank: kernels [F x C_in x L_k], bias [F].
template <typename Scalar>
struct ConvParams {
  Tensor<Scalar> kernels;
  Tensor<Scalar> bias;

  static ConvParams zeros(std::size_t filters, std::size_t channels, std::size_t kernel_len) {
    return {Tensor<Scalar>({filters, channels, kernel_len}), Tensor<Scalar>({filters})};
  }

  std::size_t filters() const { return kernels.dim(0); }
  std::size_t channels() const { return kernels.dim(1); }
  std::size_t kernel_len() const { return kernels.dim(2); }
};

template <typename Scalar>
struct ConvCache {
  Tensor<Scalar> input;           // [B x C x T]
  Tensor<Scalar> pre_activation;  // [B x F x T']
  std::size_t stride = 1;
  bool batched = true;
};

template <typename Scalar>
struct ConvGrads {
  Tensor<Scalar> input;
  ConvParams<Scalar> params;
};

/// Number of valid-padding output positions.
inline std::size_t conv_output_length(std::size_t length, std::size_t kernel_len, std::size_t stride) {
  if (stride == 0) throw DomainError("conv stride must be positive");
  if (kernel_len == 0) throw DomainError("conv kernel length must be positive");
  if (length < kernel_len) {
    throw ShapeError("conv window of length " + std::to_string(length) + " is shorter than kernel " +
                     std::to_string(kernel_len));
  }
  return (length - kernel_len) / stride + 1;
}

/// Valid cross-correlation followed by relu.
///
/// x is [C_in x T] or batched [B x C_in x T]; the result has the matching
/// rank with F channels and T' = floor((T - L_k) / stride) + 1 positions.
/// The kernel is not flipped.
template <typename Scalar>
Tensor<Scalar> conv1d_forward(const Tensor<Scalar>& x, const ConvParams<Scalar>& p, std::size_t stride = 1,
                              ConvCache<Scalar>* cache = nullptr) {
  const bool batched = x.rank() == 3;
  if (x.rank() != 2 && !batched) throw ShapeError("conv1d input must be [C x T] or [B x C x T], got " + shape_string(x.shape()));
  const std::size_t B = batched ? x.dim(0) : 1;
  const std::size_t C = x.dim(batched ? 1 : 0);
  const std::size_t T = x.dim(batched ? 2 : 1);
  if (p.kernels.rank() != 3 || p.bias.rank() != 1 || p.bias.dim(0) != p.filters()) {
    throw ShapeError("conv params malformed: kernels " + shape_string(p.kernels.shape()) + ", bias " +
                     shape_string(p.bias.shape()));
  }
  if (C != p.channels()) {
    throw ShapeError("conv input " + shape_string(x.shape()) + " has " + std::to_string(C) + " channels, kernels " +
                     shape_string(p.kernels.shape()) + " expect " + std::to_string(p.channels()));
  }
  const std::size_t F = p.filters();
  const std::size_t L = p.kernel_len();
  const std::size_t Tout = conv_output_length(T, L, stride);

  Tensor<Scalar> pre({B, F, Tout});
  const Scalar* xs = x.data();
  const Scalar* ks = p.kernels.data();
  Scalar* out = pre.data();
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t f = 0; f < F; ++f) {
      for (std::size_t t = 0; t < Tout; ++t) {
        Scalar acc = p.bias[f];
        for (std::size_t c = 0; c < C; ++c) {
          const Scalar* row = xs + (b * C + c) * T + t * stride;
          const Scalar* k = ks + (f * C + c) * L;
          for (std::size_t n = 0; n < L; ++n) acc += row[n] * k[n];
        }
        out[(b * F + f) * Tout + t] = acc;
      }
    }
  }

  Tensor<Scalar> y = pre;
  for (auto& v : y.values()) v = v > Scalar(0) ? v : Scalar(0);
  if (!batched) y.reshape({F, Tout});
  if (cache) {
    cache->input = batched ? x : x.reshaped({1, C, T});
    cache->pre_activation = std::move(pre);
    cache->stride = stride;
    cache->batched = batched;
  }
  return y;
}

template <typename Scalar>
ConvGrads<Scalar> conv1d_backward(const Tensor<Scalar>& grad_out, const ConvCache<Scalar>& cache,
                                  const ConvParams<Scalar>& p) {
  const Tensor<Scalar>& x = cache.input;
  const std::size_t B = x.dim(0), C = x.dim(1), T = x.dim(2);
  const std::size_t F = p.filters(), L = p.kernel_len();
  const std::size_t Tout = cache.pre_activation.dim(2);
  if (grad_out.size() != B * F * Tout) {
    throw ShapeError("conv1d_backward gradient " + shape_string(grad_out.shape()) + " does not match output " +
                     shape_string(cache.pre_activation.shape()));
  }

  ConvGrads<Scalar> g{Tensor<Scalar>({B, C, T}), ConvParams<Scalar>::zeros(F, C, L)};
  const Scalar* xs = x.data();
  const Scalar* ks = p.kernels.data();
  Scalar* dx = g.input.data();
  Scalar* dk = g.params.kernels.data();
  for (std::size_t b = 0; b < B; ++b) {
    for (std::size_t f = 0; f < F; ++f) {
      for (std::size_t t = 0; t < Tout; ++t) {
        const std::size_t o = (b * F + f) * Tout + t;
        if (!(cache.pre_activation[o] > Scalar(0))) continue;
        const Scalar d = grad_out[o];
        g.params.bias[f] += d;
        for (std::size_t c = 0; c < C; ++c) {
          const std::size_t base = (b * C + c) * T + t * cache.stride;
          for (std::size_t n = 0; n < L; ++n) {
            dk[(f * C + c) * L + n] += d * xs[base + n];
            dx[base + n] += d * ks[(f * C + c) * L + n];
          }
        }
      }
    }
  }
  if (!cache.batched) g.input.reshape({C, T});
  return g;
}

}  // namespace wspl
