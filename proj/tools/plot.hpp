#pragma once

#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "superosc/csv.hpp"

namespace superosc::plot {

struct Series {
  std::filesystem::path csv;  // read when `table` is empty
  std::string x_column;
  std::string y_column;
  std::string label;
  bool abs_value = false;  // plot |y|
  csv::Table table;        // optional in-memory data
};

struct PlotSpec {
  std::vector<Series> series;
  std::filesystem::path output;
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  // Optional x range; NaN means use the data range.
  double x_min = std::numeric_limits<double>::quiet_NaN();
  double x_max = std::numeric_limits<double>::quiet_NaN();
  bool markers = false;
};

// One panel per spec stacked vertically; outputs of the specs are ignored.
std::string render_svg(const std::vector<PlotSpec>& panels);
std::string render_svg(const PlotSpec& spec);

// Writes render_svg(spec) to spec.output. Throws MissingColumn.
void emit_plot(const PlotSpec& spec);
void emit_panels(const std::vector<PlotSpec>& panels, const std::filesystem::path& output);

}  // namespace superosc::plot
