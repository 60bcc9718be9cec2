#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace wspl {

inline constexpr double kGradCheckTolerance = 1e-4;

struct GradCheckOptions {
  std::size_t seeds = 10;
  std::uint64_t base_seed = 1;
  double step = 1e-5;
};

/// Worst relative error seen for one operation across all seeds.
struct GradCheckEntry {
  std::string op;
  double max_rel_error = 0.0;
  std::size_t checked = 0;  // number of scalar derivatives compared

  bool passed() const { return max_rel_error <= kGradCheckTolerance; }
};

/// |a - n| / max(1e-8, |a| + |n|).
double relative_error(double analytic, double numeric);

/// Central-difference check of every layer backward against its forward,
/// on small random shapes. Losses are random linear projections of the
/// layer outputs.
std::vector<GradCheckEntry> gradient_check_layers(const GradCheckOptions& options = {});

/// End-to-end check of model_backward on a tiny configuration with dropout
/// disabled.
GradCheckEntry gradient_check_model(const GradCheckOptions& options = {});

/// Layers followed by the model entry.
std::vector<GradCheckEntry> gradient_check_all(const GradCheckOptions& options = {});

}  // namespace wspl
