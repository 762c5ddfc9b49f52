#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clicklab {

// Dump dialect: UTF-8, tab-separated, one record per line, '\n' terminators,
// first line is the header. The literal "\N" marks a missing optional field.
inline constexpr std::string_view kMissingToken = "\\N";

std::vector<std::string_view> split_tsv(std::string_view line);

// Joins fields with tabs. Tabs and newlines inside a field are replaced by a
// single space so the record stays one line.
std::string join_tsv(const std::vector<std::string>& fields);

bool is_missing(std::string_view field);

std::optional<std::int64_t> parse_int64(std::string_view field);
std::optional<double> parse_double(std::string_view field);

// Reads a whole file as lines, tolerating a missing trailing newline.
std::vector<std::string> read_lines(const std::string& path);

void write_file(const std::string& path, std::string_view contents);

}  // namespace clicklab
