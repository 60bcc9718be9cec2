#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wattspell/data/pipeline.hpp"

namespace wspl {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Point t is predicted on iff est[t] >= threshold and actually on iff
/// truth[t] >= threshold.
ConfusionCounts confusion(std::span<const double> est, std::span<const double> truth, double threshold);

struct ClassificationScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// tp = fp = fn = 0 scores (1, 1, 1). Otherwise an undefined ratio is 0, and
/// f1 is 0 whenever tp is 0.
ClassificationScores precision_recall_f1(const ConfusionCounts& c);

struct RegressionErrors {
  double mae_norm = 0.0;
  double mse_norm = 0.0;
  double mae_watts = 0.0;
  double mse_watts = 0.0;
};

/// Errors of normalized series; watt figures rescale by (max - min).
RegressionErrors regression_errors(std::span<const double> est, std::span<const double> truth, const NormStats& stats);

struct ApplianceReport {
  std::string name;
  ClassificationScores scores;
  RegressionErrors errors;
  ConfusionCounts counts;
};

ApplianceReport evaluate_appliance(const std::string& name, std::span<const double> est, std::span<const double> truth,
                                   const NormStats& stats, double threshold);

}  // namespace wspl
