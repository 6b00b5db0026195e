#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace superosc::csv {

// Column-major numeric table with a header row.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[c][r]

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  void add(std::string name, std::vector<double> values);
  // Throws MissingColumn.
  std::span<const double> column(const std::string& name) const;
  bool has(const std::string& name) const;
};

// %.17g, so every double round-trips.
std::string format_number(double v);

// Comma separated, header row, LF line endings.
std::string to_string(const Table& table);
void write(const std::filesystem::path& path, const Table& table);
Table read(const std::filesystem::path& path);
Table parse(const std::string& text);

}  // namespace superosc::csv
