#pragma once
// Plot-ready series, summary tables and t-test blocks.
//
// CSV contract, version 1:
//   series.csv   run_index,challenges_served,solved
//   summary.csv  statistic,value   rows n, minimum, median, mean, maximum, std, iqr
//   compare.csv  statistic,<arm a>,<arm b> rows as above, then t_statistic,
//                degrees_of_freedom, p_value in the first value column
// Numbers use the shortest representation that parses back exactly; an
// absent standard deviation is written as NA.

#include <filesystem>
#include <string>
#include <vector>

#include "gauntlet/session.hpp"
#include "gauntlet/stats.hpp"

namespace gauntlet {

inline constexpr int kCsvVersion = 1;

enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(std::string_view token);

std::string series_csv(const std::vector<RunRecord>& records);
std::string summary_csv(const SummaryStats& s);
/// Inverse of summary_csv. Throws InputError on malformed text.
SummaryStats parse_summary_csv(const std::string& text);

std::string comparison_csv(const std::string& label_a, const SummaryStats& a, const std::string& label_b,
                           const SummaryStats& b, const TTestResult& t);

/// Writes series and summary files for one experiment into `dir`, creating
/// it if needed. Throws IoError when the destination is unwritable.
void export_report(const ExperimentResult& result, const std::filesystem::path& dir,
                   ReportFormat format = ReportFormat::Csv);

/// Writes the paired summary table and t-test block into `dir`.
void export_comparison(const std::string& label_a, const SummaryStats& a, const std::string& label_b,
                       const SummaryStats& b, const TTestResult& t, const std::filesystem::path& dir,
                       ReportFormat format = ReportFormat::Csv);

/// Writes `text` to `path`, replacing any existing file.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gauntlet
