#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace teflow {

// Shortest decimal form that parses back to the same double; NaN -> "NA".
std::string format_number(double value);

// Parses a full-token double; "NA" yields NaN. Returns false on junk.
bool parse_number(std::string_view token, double& out);

// Splits one CSV line on commas (no quoting). Strips a trailing '\r'.
std::vector<std::string_view> split_csv_line(std::string_view line);

std::string_view trim(std::string_view s);

std::string read_file(const std::filesystem::path& path);

// Writes via a temporary sibling then renames, so readers never see a
// half-written artifact.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace teflow
