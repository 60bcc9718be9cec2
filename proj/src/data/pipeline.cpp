#include "wattspell/data/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wattspell/core/error.hpp"

namespace wspl {

ResampleResult resample_onto(const TimeSeries& ts, std::int64_t start, std::int64_t period_s, std::size_t count) {
  if (ts.empty()) throw DomainError("resample of an empty series");
  if (period_s <= 0) throw DomainError("resample period must be positive");
  ResampleResult r;
  r.series.timestamps.resize(count);
  r.series.values.resize(count);
  std::size_t j = 0;  // first observation after the current grid point
  for (std::size_t k = 0; k < count; ++k) {
    const std::int64_t t = start + static_cast<std::int64_t>(k) * period_s;
    while (j < ts.size() && ts.timestamps[j] <= t) ++j;
    r.series.timestamps[k] = t;
    if (j == 0 || t - ts.timestamps[j - 1] > kMaxForwardFillSeconds) {
      r.series.values[k] = 0.0;
      ++r.gap_filled;
    } else {
      r.series.values[k] = ts.values[j - 1];
    }
  }
  return r;
}

ResampleResult resample_uniform(const TimeSeries& ts, std::int64_t period_s) {
  if (ts.empty()) throw DomainError("resample of an empty series");
  if (period_s <= 0) throw DomainError("resample period must be positive");
  const std::int64_t span = ts.timestamps.back() - ts.timestamps.front();
  const auto count = static_cast<std::size_t>(span / period_s) + 1;
  return resample_onto(ts, ts.timestamps.front(), period_s, count);
}

TimeSeries downsample(const TimeSeries& ts, std::size_t factor, DownsampleMethod method) {
  if (factor == 0) throw DomainError("downsample factor must be positive");
  if (ts.size() >= 2) {
    const std::int64_t period = ts.timestamps[1] - ts.timestamps[0];
    for (std::size_t i = 2; i < ts.size(); ++i) {
      if (ts.timestamps[i] - ts.timestamps[i - 1] != period) throw DomainError("downsample requires a uniform grid");
    }
  }
  const std::size_t blocks = ts.size() / factor;
  TimeSeries out;
  out.timestamps.reserve(blocks);
  out.values.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t first = b * factor;
    out.timestamps.push_back(ts.timestamps[first]);
    if (method == DownsampleMethod::Decimate) {
      out.values.push_back(ts.values[first]);
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = first; i < first + factor; ++i) sum += ts.values[i];
    out.values.push_back(sum / static_cast<double>(factor));
  }
  return out;
}

NormStats compute_stats(const TimeSeries& ts) {
  if (ts.empty()) throw DomainError("normalization statistics of an empty series");
  const auto [lo, hi] = std::minmax_element(ts.values.begin(), ts.values.end());
  return {*lo, *hi};
}

double normalize_value(double v, const NormStats& stats) {
  if (!(stats.max > stats.min)) return 0.0;
  return std::clamp((v - stats.min) / (stats.max - stats.min), 0.0, 1.0);
}

double denormalize_value(double v, const NormStats& stats) { return stats.min + v * (stats.max - stats.min); }

TimeSeries normalize(const TimeSeries& ts, const NormStats& stats) {
  TimeSeries out = ts;
  for (auto& v : out.values) v = normalize_value(v, stats);
  return out;
}

SplitRanges split_train_test(std::size_t n, double ratio, std::size_t min_side) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DomainError("split ratio must lie in (0, 1)");
  const auto cut = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  if (cut < min_side || n - cut < min_side) {
    throw DomainError("split of " + std::to_string(n) + " samples leaves fewer than " + std::to_string(min_side) +
                      " on one side");
  }
  return {{0, cut}, {cut, n}};
}

std::vector<TimeSeries> align(const std::vector<TimeSeries>& series, std::int64_t period_s, std::size_t* gap_filled) {
  if (series.empty()) throw DomainError("align of no series");
  if (period_s <= 0) throw DomainError("align period must be positive");
  std::int64_t start = std::numeric_limits<std::int64_t>::min();
  std::int64_t end = std::numeric_limits<std::int64_t>::max();
  for (const auto& s : series) {
    if (s.empty()) throw DomainError("align of an empty series");
    start = std::max(start, s.timestamps.front());
    end = std::min(end, s.timestamps.back());
  }
  if (end < start) throw DomainError("series do not overlap in time");
  const auto count = static_cast<std::size_t>((end - start) / period_s) + 1;
  std::vector<TimeSeries> out;
  std::size_t gaps = 0;
  for (const auto& s : series) {
    ResampleResult r = resample_onto(s, start, period_s, count);
    gaps += r.gap_filled;
    out.push_back(std::move(r.series));
  }
  if (gap_filled) *gap_filled = gaps;
  return out;
}

}  // namespace wspl
