#include "wattspell/model/trainer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "wattspell/core/error.hpp"
#include "wattspell/model/adam.hpp"
#include "wattspell/model/model.hpp"

namespace wspl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Runs fn(0..n-1) on up to `threads` workers. Each index writes only its
/// own output slot, so scheduling cannot change results.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  {
    std::vector<std::jthread> pool;
    const std::size_t workers = std::min(threads, n);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct ChunkResult {
  ModelParams grads;
  double squared_error = 0.0;
};

void check_batch(const WindowBatch& data, const ModelConfig& config, const char* what) {
  if (data.size() == 0) throw DomainError(std::string("fit: ") + what + " set is empty");
  if (data.window_len() != config.window_len || data.n_appliances() != config.n_appliances) {
    throw ShapeError(std::string("fit: ") + what + " windows " + shape_string(data.inputs.shape()) + " / targets " +
                     shape_string(data.targets.shape()) + " do not match the config");
  }
}

}  // namespace

TensorD predict(const TensorD& inputs, const ModelParams& params, const ModelConfig& config, std::size_t threads,
                std::size_t chunk) {
  const std::size_t B = inputs.dim(0);
  const std::size_t N = config.n_appliances;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (B + chunk - 1) / chunk;
  TensorD out({B, N});
  parallel_for(chunks, threads, [&](std::size_t k) {
    const std::size_t begin = k * chunk, end = std::min(B, begin + chunk);
    SeededRng unused(0);
    const ForwardResult r = model_forward(slice_rows(inputs, begin, end), params, config, Mode::Infer, unused);
    std::copy(r.y.data(), r.y.data() + r.y.size(), out.data() + begin * N);
  });
  return out;
}

FitResult fit(const WindowBatch& train, const WindowBatch& val, const ModelConfig& config, const FitOptions& options) {
  config.validate();
  SeededRng master(config.seed);
  SeededRng init_rng = master.split();
  return fit_from(ModelParams::initialize(config, init_rng), train, val, config, options);
}

FitResult fit_from(ModelParams params, const WindowBatch& train, const WindowBatch& val, const ModelConfig& config,
                   const FitOptions& options) {
  config.validate();
  check_batch(train, config, "training");
  check_batch(val, config, "validation");

  SeededRng master(config.seed);
  master.split();  // initialization stream, consumed by fit()
  SeededRng shuffle_rng = master.split();
  SeededRng dropout_rng = master.split();

  AdamOptions adam_opts;
  adam_opts.learning_rate = config.learning_rate;
  AdamState adam = AdamState::for_params(params, adam_opts);

  const std::size_t N = config.n_appliances;
  const std::size_t chunk = std::max<std::size_t>(options.chunk, 1);
  const std::size_t stride = std::max<std::size_t>(options.epoch_stride, 1);
  if (train.size() < stride) throw DomainError("fit: fewer training windows than epoch_stride");
  TrainReport report;
  std::vector<std::size_t> order;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto epoch_start = Clock::now();
    order.clear();
    for (std::size_t k = epoch % stride; k < train.size(); k += stride) order.push_back(k);
    shuffle_rng.shuffle(order.begin(), order.end());
    const std::size_t n = order.size();

    double epoch_sq = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const std::size_t bsz = stop - start;
      const WindowBatch mb = train.gather(std::span<const std::size_t>(order.data() + start, bsz));
      const std::size_t chunks = (bsz + chunk - 1) / chunk;
      std::vector<std::uint64_t> seeds(chunks);
      for (auto& s : seeds) s = dropout_rng.next_u64();
      const double scale = 2.0 / static_cast<double>(bsz * N);

      std::vector<ChunkResult> results(chunks);
      parallel_for(chunks, options.threads, [&](std::size_t k) {
        const std::size_t begin = k * chunk, end = std::min(bsz, begin + chunk);
        const TensorD x = slice_rows(mb.inputs, begin, end);
        const TensorD y = slice_rows(mb.targets, begin, end);
        SeededRng rng(seeds[k]);
        ModelCache cache;
        const ForwardResult fwd = model_forward(x, params, config, Mode::Train, rng, &cache);
        TensorD grad(y.shape());
        grad.vec() = fwd.y.vec() - y.vec();
        results[k].squared_error = grad.vec().squaredNorm();
        grad.vec() *= scale;
        results[k].grads = model_backward(grad, cache, params);
      });

      ModelParams total = std::move(results[0].grads);
      double batch_sq = results[0].squared_error;
      for (std::size_t k = 1; k < chunks; ++k) {
        total += results[k].grads;
        batch_sq += results[k].squared_error;
      }
      if (!std::isfinite(batch_sq)) throw TrainingError("training diverged in epoch " + std::to_string(epoch + 1));
      try {
        adam_step(params, total, adam);
      } catch (const TrainingError& e) {
        throw TrainingError("epoch " + std::to_string(epoch + 1) + ": " + e.what());
      }
      epoch_sq += batch_sq;
      ++steps;
    }
    const double train_seconds = seconds_since(epoch_start);

    const auto val_start = Clock::now();
    const TensorD est = predict(val.inputs, params, config, options.threads);
    const double val_seconds = seconds_since(val_start);
    const double val_loss = mse_loss(est, val.targets);
    const double train_loss = epoch_sq / static_cast<double>(n * N);
    if (!std::isfinite(val_loss) || !std::isfinite(train_loss)) {
      throw TrainingError("loss became non-finite in epoch " + std::to_string(epoch + 1));
    }

    report.train_loss.push_back(train_loss);
    report.val_loss.push_back(val_loss);
    report.epoch_seconds.push_back(seconds_since(epoch_start));
    report.ms_per_step.push_back(1000.0 * train_seconds / static_cast<double>(steps));
    report.infer_ms_per_window = 1000.0 * val_seconds / static_cast<double>(val.size());
    if (options.on_epoch) options.on_epoch(epoch, report);
  }
  return {std::move(params), std::move(report)};
}

}  // namespace wspl
