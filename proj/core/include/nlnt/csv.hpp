#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nlnt {

/// Shortest text that parses back to exactly `v` ("nan"/"inf" for
/// non-finite values).
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
  /// Index of a header column; throws std::out_of_range when absent.
  std::size_t column(const std::string& name) const;
};

/// Plain comma-separated parse (no quoting: our files never need it).
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it into place, creating
/// parent directories as needed.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace nlnt
