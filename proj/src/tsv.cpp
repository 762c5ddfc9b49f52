#include "clicklab/tsv.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>

#include "clicklab/errors.hpp"

namespace clicklab {

std::vector<std::string_view> split_tsv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == '\t') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string join_tsv(const std::vector<std::string>& fields) {
    std::string out;
    std::size_t total = fields.size();
    for (const auto& f : fields) total += f.size();
    out.reserve(total);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out.push_back('\t');
        for (char c : fields[i]) {
            out.push_back((c == '\t' || c == '\n' || c == '\r') ? ' ' : c);
        }
    }
    return out;
}

bool is_missing(std::string_view field) {
    return field.empty() || field == kMissingToken;
}

std::optional<std::int64_t> parse_int64(std::string_view field) {
    std::int64_t value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::optional<double> parse_double(std::string_view field) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file.is_open()) throw IoError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file.is_open()) throw IoError("cannot write " + path);
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!file.good()) throw IoError("short write to " + path);
}

}  // namespace clicklab
