#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wattspell/eval/metrics.hpp"

namespace wspl {

enum class ReportFormat { Table, Csv };

inline constexpr const char* kReportCsvHeader = "appliance,precision,recall,f1,mae_norm,mse_norm,mae_watts,mse_watts";

/// Per-appliance metrics at 4 decimals. Raises DomainError on an empty list.
std::string render_report(const std::vector<ApplianceReport>& reports, ReportFormat format);

/// Reads back a CSV produced by render_report (confusion counts are not
/// part of the CSV and come back zero).
std::vector<ApplianceReport> parse_report_csv(std::istream& in);

/// Plot data: `timestamp,truth_watts,estimate_watts`.
void write_plot_csv(std::ostream& out, std::span<const std::int64_t> timestamps, std::span<const double> truth_watts,
                    std::span<const double> estimate_watts);

}  // namespace wspl
