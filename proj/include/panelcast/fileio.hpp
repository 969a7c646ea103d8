#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace panelcast {

/// Writes `bytes` to a sibling temporary and renames it over `path`, so an
/// interrupted run never leaves a truncated output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

/// Splits on `sep`, keeping empty fields.
std::vector<std::string> split(std::string_view text, char sep);
std::vector<std::string> split_whitespace(std::string_view text);
std::string trim(std::string_view text);

/// Parses a finite double; throws parse_error mentioning `what`.
double parse_double(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);

/// `key = value` lines, `#` comments, blank lines ignored. Later keys win.
std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    std::string_view source_name);

/// %.6g formatting used by every CSV writer.
std::string format_g6(double value);

}  // namespace panelcast
