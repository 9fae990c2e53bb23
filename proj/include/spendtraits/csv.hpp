#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace spendtraits {

// One parsed CSV file. `records[i]` corresponds to data row i (header excluded);
// `record_numbers[i]` is its 1-based position in the file including the header,
// so error messages can point at the offending row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_numbers;
};

// RFC 4180: quoted fields may contain commas, doubled quotes and newlines.
// Accepts both LF and CRLF line endings. Throws on unterminated quotes and
// on rows whose field count differs from the header.
CsvTable parse_csv(std::string_view content);
CsvTable parse_csv_file(const std::filesystem::path& path);

// Quotes a field only when needed.
std::string csv_escape(std::string_view field);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double value);

}  // namespace spendtraits
