#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "superosc/error.hpp"

namespace superosc::plot {

namespace {

constexpr double kWidth = 800.0;
constexpr double kPanelHeight = 420.0;
constexpr double kLeft = 90.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;

const char* const kPalette[] = {"#c0392b", "#2c3e50", "#2980b9", "#27ae60", "#8e44ad", "#d35400"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Data {
  std::vector<double> x, y;
};

Data load(const Series& s, bool log_x, bool log_y) {
  const csv::Table t = s.table.columns.empty() ? csv::read(s.csv) : s.table;
  const auto xs = t.column(s.x_column);
  const auto ys = t.column(s.y_column);
  Data d;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double x = xs[k];
    const double y = s.abs_value ? std::abs(ys[k]) : ys[k];
    if (!std::isfinite(x) || !std::isfinite(y)) continue;
    if ((log_x && x <= 0.0) || (log_y && y <= 0.0)) continue;
    d.x.push_back(log_x ? std::log10(x) : x);
    d.y.push_back(log_y ? std::log10(y) : y);
  }
  return d;
}

// 1, 2 or 5 times a power of ten.
double nice_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double p = std::pow(10.0, std::floor(std::log10(raw)));
  const double m = raw / p;
  return (m < 1.5 ? 1.0 : m < 3.5 ? 2.0 : m < 7.5 ? 5.0 : 10.0) * p;
}

std::vector<double> ticks(double lo, double hi, bool log_scale) {
  std::vector<double> out;
  if (log_scale) {
    const double step = std::max(1.0, std::ceil((hi - lo) / 8.0));
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9; v += step) out.push_back(v);
  } else {
    const double step = nice_step(hi - lo, 6);
    for (double v = std::ceil(lo / step - 1e-9) * step; v <= hi + 1e-9 * step; v += step)
      out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

void panel(const PlotSpec& spec, double y0, std::string& out) {
  std::vector<Data> data;
  for (const auto& s : spec.series) data.push_back(load(s, spec.log_x, spec.log_y));

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  const bool fixed_x = std::isfinite(spec.x_min) && std::isfinite(spec.x_max);
  if (fixed_x) {
    xlo = spec.log_x ? std::log10(spec.x_min) : spec.x_min;
    xhi = spec.log_x ? std::log10(spec.x_max) : spec.x_max;
  }
  for (const auto& d : data) {
    for (std::size_t k = 0; k < d.x.size(); ++k) {
      if (fixed_x && (d.x[k] < xlo || d.x[k] > xhi)) continue;
      if (!fixed_x) {
        xlo = std::min(xlo, d.x[k]);
        xhi = std::max(xhi, d.x[k]);
      }
      ylo = std::min(ylo, d.y[k]);
      yhi = std::max(yhi, d.y[k]);
    }
  }
  if (!std::isfinite(xlo)) xlo = 0.0, xhi = 1.0;
  if (!std::isfinite(ylo)) ylo = 0.0, yhi = 1.0;
  if (xhi == xlo) xlo -= 0.5, xhi += 0.5;
  if (yhi == ylo) {
    const double pad = ylo == 0.0 ? 1.0 : 0.1 * std::abs(ylo);
    ylo -= pad;
    yhi += pad;
  }
  if (spec.log_y) {
    ylo = std::floor(ylo);
    yhi = std::ceil(yhi);
  } else {
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;
  }

  const double pw = kWidth - kLeft - kRight;
  const double ph = kPanelHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * pw; };
  auto sy = [&](double y) { return y0 + kTop + (yhi - y) / (yhi - ylo) * ph; };

  out += "<g class=\"panel\">\n";
  out += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"" + fmt(y0 + 28) +
         "\" text-anchor=\"middle\" font-size=\"16\">" + escape(spec.title) + "</text>\n";
  out += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(y0 + kTop) + "\" width=\"" + fmt(pw) +
         "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (double t : ticks(xlo, xhi, spec.log_x)) {
    const double x = sx(t);
    out += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y0 + kTop + ph) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(y0 + kTop + ph + 5) + "\" stroke=\"#000\"/>\n";
    const std::string label = spec.log_x ? "1e" + tick_label(t) : tick_label(t);
    out += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y0 + kTop + ph + 20) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + label + "</text>\n";
  }
  for (double t : ticks(ylo, yhi, spec.log_y)) {
    const double y = sy(t);
    out += "<line x1=\"" + fmt(kLeft - 5) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"#000\"/>\n";
    const std::string label = spec.log_y ? "1e" + tick_label(t) : tick_label(t);
    out += "<text class=\"ytick\" x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\">" + label + "</text>\n";
  }
  out += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(y0 + kPanelHeight - 15) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(spec.x_label) + "</text>\n";
  out += "<text x=\"20\" y=\"" + fmt(y0 + kTop + ph / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 " +
         fmt(y0 + kTop + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

  for (std::size_t s = 0; s < data.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    std::string pts;
    for (std::size_t k = 0; k < data[s].x.size(); ++k) {
      if (data[s].x[k] < xlo || data[s].x[k] > xhi) continue;
      if (!pts.empty()) pts += ' ';
      pts += fmt(sx(data[s].x[k])) + "," + fmt(sy(data[s].y[k]));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    if (spec.markers) {
      for (std::size_t k = 0; k < data[s].x.size(); ++k) {
        if (data[s].x[k] < xlo || data[s].x[k] > xhi) continue;
        out += "<circle cx=\"" + fmt(sx(data[s].x[k])) + "\" cy=\"" + fmt(sy(data[s].y[k])) +
               "\" r=\"3\" fill=\"" + color + "\"/>\n";
      }
    }
    if (!spec.series[s].label.empty()) {
      const double ly = y0 + kTop + 18 + 18 * static_cast<double>(s);
      out += "<line x1=\"" + fmt(kLeft + pw - 150) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
             fmt(kLeft + pw - 125) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
             "\" stroke-width=\"2\"/>\n";
      out += "<text x=\"" + fmt(kLeft + pw - 118) + "\" y=\"" + fmt(ly) + "\" font-size=\"12\">" +
             escape(spec.series[s].label) + "</text>\n";
    }
  }
  out += "</g>\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::ValidationFailed, "cannot write " + path.string());
  f << text;
}

}  // namespace

std::string render_svg(const std::vector<PlotSpec>& panels) {
  const double height = kPanelHeight * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(height) +
         "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p)
    panel(panels[p], kPanelHeight * static_cast<double>(p), out);
  out += "</svg>\n";
  return out;
}

std::string render_svg(const PlotSpec& spec) { return render_svg(std::vector<PlotSpec>{spec}); }

void emit_plot(const PlotSpec& spec) { write_text(spec.output, render_svg(spec)); }

void emit_panels(const std::vector<PlotSpec>& panels, const std::filesystem::path& output) {
  write_text(output, render_svg(panels));
}

}  // namespace superosc::plot
