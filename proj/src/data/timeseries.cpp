#include "wattspell/data/timeseries.hpp"

#include <cmath>

#include "wattspell/core/error.hpp"

namespace wspl {

bool TimeSeries::valid() const {
  if (timestamps.size() != values.size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) return false;
    if (i > 0 && timestamps[i] <= timestamps[i - 1]) return false;
  }
  return true;
}

TimeSeries TimeSeries::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > size()) throw DomainError("time series slice out of range");
  return {std::vector<std::int64_t>(timestamps.begin() + static_cast<std::ptrdiff_t>(begin),
                                    timestamps.begin() + static_cast<std::ptrdiff_t>(end)),
          std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(begin),
                              values.begin() + static_cast<std::ptrdiff_t>(end))};
}

}  // namespace wspl
