#include "wattspell/eval/metrics.hpp"

#include <cmath>

#include "wattspell/core/error.hpp"

namespace wspl {

ConfusionCounts confusion(std::span<const double> est, std::span<const double> truth, double threshold) {
  if (est.size() != truth.size()) {
    throw DomainError("confusion: estimate length " + std::to_string(est.size()) + " differs from truth length " +
                      std::to_string(truth.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const bool predicted = est[i] >= threshold;
    const bool actual = truth[i] >= threshold;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return c;
}

ClassificationScores precision_recall_f1(const ConfusionCounts& c) {
  if (c.tp == 0 && c.fp == 0 && c.fn == 0) return {1.0, 1.0, 1.0};
  ClassificationScores s;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp > 0) s.precision = tp / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) s.recall = tp / static_cast<double>(c.tp + c.fn);
  // Harmonic mean of P and R, written over the integer counts so it rounds once.
  if (c.tp > 0) s.f1 = 2.0 * tp / static_cast<double>(2 * c.tp + c.fp + c.fn);
  return s;
}

RegressionErrors regression_errors(std::span<const double> est, std::span<const double> truth, const NormStats& stats) {
  if (est.size() != truth.size()) throw DomainError("regression_errors: length mismatch");
  if (est.empty()) throw DomainError("regression_errors of empty series");
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const double d = est[i] - truth[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const auto n = static_cast<double>(est.size());
  const double range = stats.max - stats.min;
  RegressionErrors e;
  e.mae_norm = abs_sum / n;
  e.mse_norm = sq_sum / n;
  e.mae_watts = e.mae_norm * range;
  e.mse_watts = e.mse_norm * range * range;
  return e;
}

ApplianceReport evaluate_appliance(const std::string& name, std::span<const double> est, std::span<const double> truth,
                                   const NormStats& stats, double threshold) {
  ApplianceReport r;
  r.name = name;
  r.counts = confusion(est, truth, threshold);
  r.scores = precision_recall_f1(r.counts);
  r.errors = regression_errors(est, truth, stats);
  return r;
}

}  // namespace wspl
