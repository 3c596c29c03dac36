#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdx {

// Malformed input content: maps to the usage/validation exit code.
struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures: maps to the I/O exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsvMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  bool had_header = false;
};

// Comma-separated numeric matrix, '.' decimal, optional header row
// (autodetected: any non-numeric token in the first line). Errors carry the
// 1-based line number.
CsvMatrix read_matrix_csv(const std::filesystem::path& path);

// Tokens from an inline comma-separated list (argument contains a comma) or
// from a file (one token per line or comma/whitespace separated).
std::vector<std::string> read_value_tokens(const std::string& path_or_inline);

// Two-group labels from tokens: exactly two distinct values; group 0 is the
// value seen first.
std::vector<std::uint8_t> parse_labels(const std::vector<std::string>& tokens);

std::vector<double> parse_doubles(const std::vector<std::string>& tokens);

// Shortest round-trip formatting; locale-independent.
std::string format_double(double value);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace fdx
