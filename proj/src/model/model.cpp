#include "wattspell/model/model.hpp"

#include "wattspell/layers/dense.hpp"
#include "wattspell/layers/dropout.hpp"
#include "wattspell/layers/layout.hpp"

namespace wspl {

ForwardResult model_forward(const TensorD& x, const ModelParams& params, const ModelConfig& config, Mode mode,
                            SeededRng& rng, ModelCache* cache) {
  const bool batched = x.rank() == 3;
  if (!((x.rank() == 2 && x.dim(1) == 1) || (batched && x.dim(2) == 1)) || x.dim(batched ? 1 : 0) != config.window_len) {
    throw ShapeError("model input " + shape_string(x.shape()) + " is not a window of length " +
                     std::to_string(config.window_len));
  }
  if (params.bilstm.size() != config.bilstm_layers) throw ShapeError("model has " + std::to_string(params.bilstm.size()) + " BiLSTM layers, config expects " + std::to_string(config.bilstm_layers));
  const std::size_t B = batched ? x.dim(0) : 1;
  const DropoutSpec drop{config.dropout, mode == Mode::Train};

  // [B x W x 1] and [B x 1 x W] share one memory layout.
  const TensorD conv_in = x.reshaped({B, 1, config.window_len});
  const TensorD conv_out = conv1d_forward(conv_in, params.conv, config.conv_stride, cache ? &cache->conv : nullptr);
  const TensorD pooled = maxpool1d_forward(conv_out, config.pool, cache ? &cache->pool : nullptr);
  TensorD seq = to_time_major(pooled);

  if (cache) {
    cache->bilstm.assign(params.bilstm.size(), {});
    cache->dropout_masks.assign(params.bilstm.size(), {});
  }
  for (std::size_t l = 0; l < params.bilstm.size(); ++l) {
    seq = bilstm_forward(seq, params.bilstm[l], cache ? &cache->bilstm[l] : nullptr);
    seq = dropout_forward(seq, drop, rng, cache ? &cache->dropout_masks[l] : nullptr);
  }

  AttentionOutput<double> att = attention_forward(seq, params.attention, cache ? &cache->attention : nullptr);
  TensorD y = dense_forward(att.context, params.dense);
  if (cache) {
    cache->context = att.context;
    cache->batched = batched;
  }
  if (!batched) {
    y.reshape({config.n_appliances});
    att.alpha.reshape({att.alpha.size()});
  }
  return {std::move(y), std::move(att.alpha)};
}

ModelParams model_backward(const TensorD& grad_y, const ModelCache& cache, const ModelParams& params) {
  ModelParams g;
  DenseGrads<double> dd = dense_backward(grad_y, cache.context, params.dense);
  g.dense = std::move(dd.params);

  AttentionGrads<double> da = attention_backward(dd.input, cache.attention, params.attention);
  g.attention = std::move(da.params);

  TensorD grad_seq = std::move(da.input);
  g.bilstm.resize(params.bilstm.size());
  for (std::size_t l = params.bilstm.size(); l-- > 0;) {
    grad_seq = dropout_backward(grad_seq, cache.dropout_masks[l]);
    BiLstmGrads<double> db = bilstm_backward(grad_seq, cache.bilstm[l], params.bilstm[l]);
    g.bilstm[l] = std::move(db.params);
    grad_seq = std::move(db.input);
  }

  const TensorD grad_pooled = to_channel_major(grad_seq);
  const TensorD grad_conv = maxpool1d_backward(grad_pooled, cache.pool);
  ConvGrads<double> dc = conv1d_backward(grad_conv, cache.conv, params.conv);
  g.conv = std::move(dc.params);
  return g;
}

double mse_loss(const TensorD& y_hat, const TensorD& y) {
  if (y_hat.shape() != y.shape()) {
    throw ShapeError("mse_loss shape mismatch: " + shape_string(y_hat.shape()) + " vs " + shape_string(y.shape()));
  }
  if (y.empty()) throw DomainError("mse_loss of empty tensors");
  return (y_hat.vec() - y.vec()).squaredNorm() / static_cast<double>(y.size());
}

TensorD mse_grad(const TensorD& y_hat, const TensorD& y) {
  if (y_hat.shape() != y.shape()) {
    throw ShapeError("mse_grad shape mismatch: " + shape_string(y_hat.shape()) + " vs " + shape_string(y.shape()));
  }
  TensorD g(y.shape());
  g.vec() = (2.0 / static_cast<double>(y.size())) * (y_hat.vec() - y.vec());
  return g;
}

}  // namespace wspl
