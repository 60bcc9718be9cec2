#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace wspl {

/// Power readings in watts for one channel, keyed by Unix seconds.
struct TimeSeries {
  std::vector<std::int64_t> timestamps;
  std::vector<double> values;

  std::size_t size() const { return timestamps.size(); }
  bool empty() const { return timestamps.empty(); }

  /// Equal lengths, strictly increasing timestamps, finite values.
  bool valid() const;

  /// Samples [begin, end).
  TimeSeries slice(std::size_t begin, std::size_t end) const;

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;
};

struct ChannelMeta {
  int id = 0;
  std::string label;

  friend bool operator==(const ChannelMeta&, const ChannelMeta&) = default;
};

}  // namespace wspl
