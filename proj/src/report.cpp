#include "gauntlet/report.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "gauntlet/error.hpp"
#include "gauntlet/json_io.hpp"

namespace gauntlet {

ReportFormat parse_report_format(std::string_view token) {
    if (token == "csv") return ReportFormat::Csv;
    if (token == "json") return ReportFormat::Json;
    throw InputError(fmt::format("unknown report format: {}", token));
}

namespace {

std::string num(double v) { return fmt::format("{}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string("NA"); }

double parse_number(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw InputError("not a number: " + s);
    return v;
}

}  // namespace

std::string series_csv(const std::vector<RunRecord>& records) {
    std::string out = "run_index,challenges_served,solved\n";
    for (const auto& r : records)
        out += fmt::format("{},{},{}\n", r.run_index, r.challenges_served, r.solved ? 1 : 0);
    return out;
}

std::string summary_csv(const SummaryStats& s) {
    return fmt::format("statistic,value\nn,{}\nminimum,{}\nmedian,{}\nmean,{}\nmaximum,{}\nstd,{}\niqr,{}\n", s.n,
                       num(s.minimum), num(s.median), num(s.mean), num(s.maximum), num(s.std), num(s.iqr));
}

SummaryStats parse_summary_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "statistic,value") throw InputError("summary CSV header missing");
    SummaryStats s;
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("summary CSV row without a value: " + line);
        const std::string key = line.substr(0, comma);
        const std::string value = line.substr(comma + 1);
        ++seen;
        if (key == "n") s.n = static_cast<std::size_t>(parse_number(value));
        else if (key == "minimum") s.minimum = parse_number(value);
        else if (key == "median") s.median = parse_number(value);
        else if (key == "mean") s.mean = parse_number(value);
        else if (key == "maximum") s.maximum = parse_number(value);
        else if (key == "std") s.std = value == "NA" ? std::nullopt : std::optional<double>(parse_number(value));
        else if (key == "iqr") s.iqr = parse_number(value);
        else throw InputError("unknown summary statistic: " + key);
    }
    if (seen != 7) throw InputError("summary CSV must have exactly seven statistics");
    return s;
}

std::string comparison_csv(const std::string& label_a, const SummaryStats& a, const std::string& label_b,
                           const SummaryStats& b, const TTestResult& t) {
    std::string out = fmt::format("statistic,{},{}\n", label_a, label_b);
    out += fmt::format("n,{},{}\n", a.n, b.n);
    out += fmt::format("minimum,{},{}\n", num(a.minimum), num(b.minimum));
    out += fmt::format("median,{},{}\n", num(a.median), num(b.median));
    out += fmt::format("mean,{},{}\n", num(a.mean), num(b.mean));
    out += fmt::format("maximum,{},{}\n", num(a.maximum), num(b.maximum));
    out += fmt::format("std,{},{}\n", num(a.std), num(b.std));
    out += fmt::format("iqr,{},{}\n", num(a.iqr), num(b.iqr));
    out += fmt::format("t_statistic,{},\n", num(t.t_statistic));
    out += fmt::format("degrees_of_freedom,{},\n", num(t.degrees_of_freedom));
    out += fmt::format("p_value,{},\n", num(t.p_value));
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    out << text;
    out.flush();
    if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

namespace {
void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError(fmt::format("cannot create output directory {}", dir.string()));
}
}  // namespace

void export_report(const ExperimentResult& result, const std::filesystem::path& dir, ReportFormat format) {
    ensure_dir(dir);
    if (format == ReportFormat::Csv) {
        write_text(dir / "series.csv", series_csv(result.records));
        write_text(dir / "summary.csv", summary_csv(result.summary));
        return;
    }
    json series = json::array();
    for (const auto& r : result.records)
        series.push_back({{"run_index", r.run_index}, {"challenges_served", r.challenges_served}, {"solved", r.solved}});
    const json report = {{"version", kCsvVersion},
                         {"preset", result.config.preset},
                         {"series", std::move(series)},
                         {"summary", result.summary}};
    write_text(dir / "report.json", canonical(report) + "\n");
}

void export_comparison(const std::string& label_a, const SummaryStats& a, const std::string& label_b,
                       const SummaryStats& b, const TTestResult& t, const std::filesystem::path& dir,
                       ReportFormat format) {
    ensure_dir(dir);
    if (format == ReportFormat::Csv) {
        write_text(dir / "compare.csv", comparison_csv(label_a, a, label_b, b, t));
        return;
    }
    const json report = {{"version", kCsvVersion},
                         {"arms", {{{"label", label_a}, {"summary", a}}, {{"label", label_b}, {"summary", b}}}},
                         {"t_test", t}};
    write_text(dir / "compare.json", canonical(report) + "\n");
}

}  // namespace gauntlet
