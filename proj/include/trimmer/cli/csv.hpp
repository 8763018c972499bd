#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace trimmer::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; UsageError if absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> numeric_column(std::string_view name) const;
};

// Shortest decimal text that round-trips to the same double.
std::string format_double(double v);

// RFC 4180: quote fields containing a comma, quote, CR or LF; double quotes.
std::string csv_escape(std::string_view field);

void write_csv(std::ostream& os, const CsvTable& table);
void save_csv(const CsvTable& table, const std::filesystem::path& path);

// Accepts CRLF or LF line endings and quoted fields spanning lines.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace trimmer::cli
