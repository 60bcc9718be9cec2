#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "wattspell/data/timeseries.hpp"

namespace wspl {

struct ChannelParse {
  TimeSeries series;
  std::size_t clamped_negative = 0;  // negative readings set to 0
  std::size_t reordered = 0;         // out-of-order lines that required a sort
  std::size_t duplicates = 0;        // repeated timestamps collapsed to the last value
};

/// Parses "<unix_seconds> <watts>" lines. Blank lines are skipped and a
/// trailing carriage return is tolerated; anything else malformed raises
/// ParseError with the line number.
ChannelParse parse_channel(std::istream& in);
ChannelParse parse_channel_file(const std::filesystem::path& path);

/// Parses labels.dat lines "<channel_id> <label>".
std::vector<ChannelMeta> parse_labels(std::istream& in);

/// One house directory: labels.dat plus channel_<id>.dat per label.
struct HouseData {
  std::vector<ChannelMeta> channels;             // in channel-id order
  std::map<int, ChannelParse> parsed;            // keyed by channel id
};

HouseData load_house(const std::filesystem::path& dir);

/// Appliance labels used for evaluation reports.
const std::vector<std::string>& standard_appliance_labels();

}  // namespace wspl
