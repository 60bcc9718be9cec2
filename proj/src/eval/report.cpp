#include "wattspell/eval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <string_view>

#include "wattspell/core/error.hpp"

namespace wspl {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string render_report(const std::vector<ApplianceReport>& reports, ReportFormat format) {
  if (reports.empty()) throw DomainError("render_report needs at least one appliance");
  std::string out;
  if (format == ReportFormat::Csv) {
    out += kReportCsvHeader;
    out += '\n';
    for (const auto& r : reports) {
      out += r.name + "," + fixed(r.scores.precision, 4) + "," + fixed(r.scores.recall, 4) + "," + fixed(r.scores.f1, 4) +
             "," + fixed(r.errors.mae_norm, 6) + "," + fixed(r.errors.mse_norm, 6) + "," + fixed(r.errors.mae_watts, 6) +
             "," + fixed(r.errors.mse_watts, 6) + "\n";
    }
    return out;
  }

  std::size_t name_width = std::string_view("appliance").size();
  for (const auto& r : reports) name_width = std::max(name_width, r.name.size());
  name_width += 2;
  out += pad("appliance", name_width) + "precision  recall  f1      mae_watts\n";
  for (const auto& r : reports) {
    out += pad(r.name, name_width) + pad(fixed(r.scores.precision, 4), 11) + pad(fixed(r.scores.recall, 4), 8) +
           pad(fixed(r.scores.f1, 4), 8) + fixed(r.errors.mae_watts, 2) + "\n";
  }
  return out;
}

std::vector<ApplianceReport> parse_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kReportCsvHeader) throw ParseError(1, "unexpected report header");
  std::vector<ApplianceReport> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos; rest.remove_prefix(comma + 1)) {
      fields.push_back(rest.substr(0, comma));
    }
    fields.push_back(rest);
    if (fields.size() != 8) throw ParseError(line_no, "expected 8 report fields");
    double v[7];
    for (int i = 0; i < 7; ++i) {
      const auto f = fields[static_cast<std::size_t>(i) + 1];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[i]);
      if (ec != std::errc() || ptr != f.data() + f.size()) throw ParseError(line_no, "invalid report value");
    }
    ApplianceReport r;
    r.name = std::string(fields[0]);
    r.scores = {v[0], v[1], v[2]};
    r.errors = {v[3], v[4], v[5], v[6]};
    out.push_back(std::move(r));
  }
  return out;
}

void write_plot_csv(std::ostream& out, std::span<const std::int64_t> timestamps, std::span<const double> truth_watts,
                    std::span<const double> estimate_watts) {
  if (timestamps.size() != truth_watts.size() || timestamps.size() != estimate_watts.size()) {
    throw DomainError("plot columns differ in length");
  }
  out << "timestamp,truth_watts,estimate_watts\n";
  for (std::size_t i = 0; i < timestamps.size(); ++i) {
    out << timestamps[i] << ',' << fixed(truth_watts[i], 6) << ',' << fixed(estimate_watts[i], 6) << '\n';
  }
}

}  // namespace wspl
