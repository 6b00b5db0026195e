#include "superosc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "superosc/error.hpp"

namespace superosc::csv {

void Table::add(std::string name, std::vector<double> values) {
  require(data.empty() || values.size() == rows(), "column '" + name + "' has the wrong length");
  columns.push_back(std::move(name));
  data.push_back(std::move(values));
}

bool Table::has(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

std::span<const double> Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) return data[c];
  fail(ErrorKind::MissingColumn, "column '" + name + "' not found");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_string(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += format_number(table.data[c][r]);
    }
    out += '\n';
  }
  return out;
}

void write(const std::filesystem::path& path, const Table& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::ValidationFailed, "cannot write " + path.string());
  f << to_string(table);
}

Table parse(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return t;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::istringstream hs(line);
    std::string name;
    while (std::getline(hs, name, ',')) t.columns.push_back(name);
  }
  t.data.assign(t.columns.size(), {});
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(rs, cell, ',')) {
      require(c < t.columns.size(), "row " + std::to_string(row) + " has too many cells");
      try {
        t.data[c].push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorKind::ValidationFailed,
             "row " + std::to_string(row) + ": '" + cell + "' is not a number");
      }
      ++c;
    }
    require(c == t.columns.size(), "row " + std::to_string(row) + " has too few cells");
  }
  return t;
}

Table read(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::ValidationFailed, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

}  // namespace superosc::csv
