#include "gauntlet/runlog.hpp"

#include <fstream>

#include <fmt/format.h>

#include "gauntlet/error.hpp"

namespace gauntlet {

namespace {

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

JsonLines load_json_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open log {}", path.string()));

    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
    std::size_t last = lines.size();
    while (last > 0 && blank(lines[last - 1])) --last;

    JsonLines out;
    for (std::size_t i = 0; i < last; ++i) {
        if (blank(lines[i])) continue;
        try {
            out.rows.push_back(json::parse(lines[i]));
        } catch (const json::parse_error&) {
            if (i + 1 == last) {
                out.warnings.push_back(
                    fmt::format("{}:{}: dropped truncated final record", path.string(), i + 1));
                break;
            }
            throw IoError(fmt::format("{}:{}: corrupt log record", path.string(), i + 1));
        }
    }
    return out;
}

void append_json_line(const json& row, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError(fmt::format("cannot append to {}", path.string()));
    out << canonical(row) << '\n';
    out.flush();
    if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

void persist_log(std::span<const RunRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError(fmt::format("cannot append to {}", path.string()));
    for (const auto& r : records) out << canonical(json(r)) << '\n';
    out.flush();
    if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

LoadedLog load_log(const std::filesystem::path& path) {
    JsonLines lines = load_json_lines(path);
    LoadedLog out;
    out.warnings = std::move(lines.warnings);
    // Line numbers for record-level errors refer to non-blank rows, which
    // match physical lines for logs this module wrote.
    for (std::size_t i = 0; i < lines.rows.size(); ++i) {
        try {
            out.records.push_back(lines.rows[i].get<RunRecord>());
        } catch (const std::exception& e) {
            if (i + 1 == lines.rows.size() && out.warnings.empty()) {
                out.warnings.push_back(fmt::format("{}:{}: dropped incomplete final record", path.string(), i + 1));
                break;
            }
            throw IoError(fmt::format("{}:{}: invalid run record: {}", path.string(), i + 1, e.what()));
        }
    }
    return out;
}

}  // namespace gauntlet
