#include "wattspell/data/redd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <string_view>

#include "wattspell/core/error.hpp"

namespace wspl {

namespace {

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

template <typename T>
bool parse_whole(std::string_view text, T& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (*first == '+') ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

ChannelParse parse_channel(std::istream& in) {
  struct Row {
    std::int64_t t;
    double w;
  };
  std::vector<Row> rows;
  ChannelParse result;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim_cr(line);
    if (text.empty()) continue;
    const auto space = text.find(' ');
    if (space == std::string_view::npos) throw ParseError(line_no, "expected '<unix_seconds> <watts>'");
    Row r{};
    if (!parse_whole(text.substr(0, space), r.t)) throw ParseError(line_no, "invalid timestamp");
    if (!parse_whole(text.substr(space + 1), r.w) || !std::isfinite(r.w)) throw ParseError(line_no, "invalid power reading");
    if (r.w < 0.0) {
      r.w = 0.0;
      ++result.clamped_negative;
    }
    rows.push_back(r);
  }

  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].t < rows[i - 1].t) ++result.reordered;
  }
  if (result.reordered) {
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });
  }

  auto& ts = result.series;
  ts.timestamps.reserve(rows.size());
  ts.values.reserve(rows.size());
  for (const Row& r : rows) {
    if (!ts.timestamps.empty() && ts.timestamps.back() == r.t) {
      ts.values.back() = r.w;
      ++result.duplicates;
      continue;
    }
    ts.timestamps.push_back(r.t);
    ts.values.push_back(r.w);
  }
  return result;
}

ChannelParse parse_channel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open channel file " + path.string());
  try {
    return parse_channel(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

std::vector<ChannelMeta> parse_labels(std::istream& in) {
  std::vector<ChannelMeta> out;
  std::set<int> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim_cr(line);
    if (text.empty()) continue;
    const auto space = text.find(' ');
    ChannelMeta meta;
    if (space == std::string_view::npos || !parse_whole(text.substr(0, space), meta.id) || meta.id <= 0) {
      throw ParseError(line_no, "expected '<channel_id> <label>'");
    }
    meta.label = std::string(text.substr(space + 1));
    if (meta.label.empty()) throw ParseError(line_no, "empty channel label");
    if (!seen.insert(meta.id).second) throw ParseError(line_no, "duplicate channel id " + std::to_string(meta.id));
    out.push_back(std::move(meta));
  }
  std::sort(out.begin(), out.end(), [](const ChannelMeta& a, const ChannelMeta& b) { return a.id < b.id; });
  return out;
}

HouseData load_house(const std::filesystem::path& dir) {
  const auto labels_path = dir / "labels.dat";
  std::ifstream labels(labels_path);
  if (!labels) throw DomainError("missing labels file " + labels_path.string());
  HouseData house;
  house.channels = parse_labels(labels);
  for (const auto& meta : house.channels) {
    house.parsed[meta.id] = parse_channel_file(dir / ("channel_" + std::to_string(meta.id) + ".dat"));
  }
  return house;
}

const std::vector<std::string>& standard_appliance_labels() {
  // REDD spells the dishwasher label "dishwaser".
  static const std::vector<std::string> labels = {"dishwaser",    "electric_heat", "stove",
                                                  "refrigerator", "microwave",     "washer_dryer"};
  return labels;
}

}  // namespace wspl
