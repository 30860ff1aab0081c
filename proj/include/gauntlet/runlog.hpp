#pragma once
// Append-only line-delimited JSON logs, one record per line.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gauntlet/json_io.hpp"
#include "gauntlet/session.hpp"

namespace gauntlet {

struct JsonLines {
    std::vector<json> rows;
    std::vector<std::string> warnings;
};

/// Reads a JSON-lines file. A malformed final line (an interrupted append)
/// is dropped with a warning; any earlier malformed line throws IoError
/// naming its 1-based line number.
JsonLines load_json_lines(const std::filesystem::path& path);

/// Appends one canonical JSON line. Throws IoError if the file cannot be written.
void append_json_line(const json& row, const std::filesystem::path& path);

void persist_log(std::span<const RunRecord> records, const std::filesystem::path& path);

struct LoadedLog {
    std::vector<RunRecord> records;
    std::vector<std::string> warnings;
};

LoadedLog load_log(const std::filesystem::path& path);

}  // namespace gauntlet
