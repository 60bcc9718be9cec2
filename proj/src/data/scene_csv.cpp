#include "wattspell/data/scene_csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "wattspell/core/error.hpp"

namespace wspl {

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void append_fixed6(std::string& out, double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.6f", v);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

void write_scene_csv(std::ostream& out, const Scene& scene) {
  if (scene.names.size() != scene.appliances.size()) throw DomainError("scene names and appliance series disagree");
  std::string line = "timestamp,aggregate";
  for (const auto& name : scene.names) line += "," + name;
  out << line << '\n';
  for (std::size_t k = 0; k < scene.aggregate.size(); ++k) {
    line = std::to_string(scene.aggregate.timestamps[k]);
    line += ',';
    append_fixed6(line, scene.aggregate.values[k]);
    for (const auto& a : scene.appliances) {
      if (a.size() != scene.aggregate.size()) throw DomainError("scene appliance series length mismatch");
      line += ',';
      append_fixed6(line, a.values[k]);
    }
    out << line << '\n';
  }
}

void write_scene_csv(const std::filesystem::path& path, const Scene& scene) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write scene file " + path.string());
  write_scene_csv(out, scene);
}

Scene read_scene_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing scene header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 2 || header[0] != "timestamp" || header[1] != "aggregate") {
    throw ParseError(1, "scene header must be 'timestamp,aggregate[,<appliances...>]'");
  }
  Scene scene;
  for (std::size_t i = 2; i < header.size(); ++i) {
    scene.names.emplace_back(header[i]);
    scene.appliances.emplace_back();
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != header.size()) throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields");
    std::int64_t t = 0;
    if (std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), t).ptr != fields[0].data() + fields[0].size()) {
      throw ParseError(line_no, "invalid timestamp");
    }
    if (!scene.aggregate.timestamps.empty() && t <= scene.aggregate.timestamps.back()) {
      throw ParseError(line_no, "timestamps must be strictly increasing");
    }
    std::vector<double> row(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), row[i - 1]);
      if (ec != std::errc() || ptr != fields[i].data() + fields[i].size()) throw ParseError(line_no, "invalid value");
    }
    scene.aggregate.timestamps.push_back(t);
    scene.aggregate.values.push_back(row[0]);
    for (std::size_t a = 0; a < scene.appliances.size(); ++a) {
      scene.appliances[a].timestamps.push_back(t);
      scene.appliances[a].values.push_back(row[a + 1]);
    }
  }
  return scene;
}

Scene read_scene_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open scene file " + path.string());
  try {
    return read_scene_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

}  // namespace wspl
