#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spantree {

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& line, char delim);

// Parses a full cell as a finite double; nullopt on trailing garbage,
// empty input, NaN or infinity.
std::optional<double> parse_finite_double(const std::string& cell);

// Shortest decimal string that round-trips the exact double value.
std::string format_full(double v);

// Fixed 6-decimal formatting for report files.
std::string format_fixed(double v);

// FNV-1a 64-bit over a byte string, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace spantree
