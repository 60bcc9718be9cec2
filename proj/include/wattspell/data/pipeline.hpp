#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "wattspell/data/timeseries.hpp"

namespace wspl {

/// Readings older than this at a grid point count as an outage.
inline constexpr std::int64_t kMaxForwardFillSeconds = 180;

struct ResampleResult {
  TimeSeries series;
  std::size_t gap_filled = 0;  // grid points zero-filled because of an outage
};

/// Forward-fill onto the grid first_timestamp + k*period up to the last
/// timestamp. Grid points whose most recent reading is more than 180 s old
/// are set to 0.
ResampleResult resample_uniform(const TimeSeries& ts, std::int64_t period_s);

/// Forward-fill onto an explicit grid start + k*period, k < count. Points
/// before the first reading are zero and counted as gaps.
ResampleResult resample_onto(const TimeSeries& ts, std::int64_t start, std::int64_t period_s, std::size_t count);

enum class DownsampleMethod { Mean, Decimate };

/// Blocks of `factor` samples reduce to their mean (or first sample with
/// Decimate), stamped with the block start. The remainder is dropped.
TimeSeries downsample(const TimeSeries& ts, std::size_t factor, DownsampleMethod method = DownsampleMethod::Mean);

struct NormStats {
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const NormStats&, const NormStats&) = default;
};

NormStats compute_stats(const TimeSeries& ts);

/// (v - min) / (max - min) clipped to [0, 1]; all zeros when max == min.
TimeSeries normalize(const TimeSeries& ts, const NormStats& stats);
double normalize_value(double v, const NormStats& stats);
double denormalize_value(double v, const NormStats& stats);

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct SplitRanges {
  IndexRange train;
  IndexRange test;
};

/// Chronological cut: the first floor(ratio * n) samples train, the rest
/// test. Each side must hold at least `min_side` samples.
SplitRanges split_train_test(std::size_t n, double ratio = 0.8, std::size_t min_side = 1);

/// Intersects the spans of several uniform-grid series and resamples them
/// onto the common grid (forward fill, same outage rule).
std::vector<TimeSeries> align(const std::vector<TimeSeries>& series, std::int64_t period_s,
                              std::size_t* gap_filled = nullptr);

}  // namespace wspl
