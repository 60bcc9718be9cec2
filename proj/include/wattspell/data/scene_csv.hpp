#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "wattspell/data/timeseries.hpp"

namespace wspl {

/// An aggregate series with aligned, named appliance series in watts.
struct Scene {
  TimeSeries aggregate;
  std::vector<std::string> names;
  std::vector<TimeSeries> appliances;
};

/// Header `timestamp,aggregate,<names...>`; values with 6 decimals. Reading
/// accepts an aggregate-only file.
void write_scene_csv(std::ostream& out, const Scene& scene);
void write_scene_csv(const std::filesystem::path& path, const Scene& scene);

Scene read_scene_csv(std::istream& in);
Scene read_scene_csv(const std::filesystem::path& path);

}  // namespace wspl
