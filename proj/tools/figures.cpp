#include "figures.hpp"

#include <cmath>
#include <numbers>

#include "plot.hpp"
#include "superosc/anharmonic.hpp"
#include "superosc/csv.hpp"
#include "superosc/grid.hpp"
#include "superosc/response.hpp"

namespace superosc::figures {

namespace fs = std::filesystem;
using std::numbers::pi;

signal::ConstraintSpec example_constraints() {
  signal::ConstraintSpec spec;
  spec.bandlimit = pi / 2.0;
  for (int n = -5; n <= 5; ++n) spec.points.push_back({double(n), n % 2 == 0 ? 1.0 : -1.0});
  return spec;
}

namespace {

signal::SincExpansion example_signal(signal::Precision precision) {
  signal::SolveOptions opt;
  opt.precision = precision;
  return signal::solve_min_norm(example_constraints(), opt);
}

}  // namespace

FigureOutput fig1(const fs::path& dir, signal::Precision precision) {
  FigureOutput out;
  const auto spec = example_constraints();
  const auto f = example_signal(precision);
  const auto window = signal::constraint_window(spec);
  const auto scan = signal::default_scan(f, window);
  const auto ch = signal::characterize(f, window, scan, 0.01);

  const TimeGrid grid = TimeGrid::uniform(scan.lo, scan.hi, 0.01);
  std::vector<double> t(grid.times().begin(), grid.times().end()), v, ref;
  for (double x : t) {
    v.push_back(f(x));
    ref.push_back(std::cos(f.bandlimit() * x));
  }
  csv::Table table;
  table.add("t", t);
  table.add("f", v);
  table.add("bandlimit_component", ref);
  csv::write(dir / "signal.csv", table);
  out.files.push_back(dir / "signal.csv");

  io::json sig = io::to_json(f);
  sig["characterization"] = io::to_json(ch);
  io::write_file(dir / "signal.json", sig);
  out.files.push_back(dir / "signal.json");

  plot::PlotSpec global;
  global.title = "Superoscillating signal, global view";
  global.x_label = "t";
  global.y_label = "|f(t)|";
  global.log_y = true;
  global.series.push_back({{}, "t", "f", "|f|", true, table});
  plot::PlotSpec zoom;
  zoom.title = "Constraint window";
  zoom.x_label = "t";
  zoom.y_label = "f(t)";
  zoom.x_min = -4.0;
  zoom.x_max = 4.0;
  zoom.series.push_back({{}, "t", "f", "f", false, table});
  zoom.series.push_back({{}, "t", "bandlimit_component", "cos(Omega t)", false, table});
  plot::emit_panels({global, zoom}, dir / "fig1.svg");
  out.files.push_back(dir / "fig1.svg");

  out.summary = {{"dynamic_range", ch.dynamic_range},
                 {"peak_inside", ch.peak_inside},
                 {"peak_outside", ch.peak_outside},
                 {"peak_outside_time", ch.peak_outside_time},
                 {"condition_number", f.condition_number()},
                 {"precision", io::to_string(f.precision())}};
  if (ch.local_period_estimate) out.summary["local_period_estimate"] = *ch.local_period_estimate;
  return out;
}

FigureOutput fig2(const fs::path& dir, double quad_tol, signal::Precision precision) {
  FigureOutput out;
  const auto f = example_signal(precision);
  const double omega = pi;
  const TimeGrid grid = TimeGrid::uniform(-40.0, 40.0, 0.05);
  response::QuadratureSettings qs;
  qs.tol_per_unit = quad_tol;
  const auto trace = response::partial_fourier(f, omega, grid, qs);

  csv::Table table;
  table.add("t", trace.times);
  std::vector<double> re, im;
  for (auto s : trace.amplitudes) {
    re.push_back(s.real());
    im.push_back(s.imag());
  }
  table.add("re_S", re);
  table.add("im_S", im);
  table.add("excitation", trace.excitation);
  csv::write(dir / "response.csv", table);
  out.files.push_back(dir / "response.csv");

  plot::PlotSpec p;
  p.title = "Partial Fourier transform at omega = pi";
  p.x_label = "t";
  p.y_label = "|S(t)|^2";
  p.series.push_back({{}, "t", "excitation", "|S_pi(t)|^2", false, table});
  p.output = dir / "fig2.svg";
  plot::emit_plot(p);
  out.files.push_back(p.output);

  std::size_t arg = 0;
  for (std::size_t k = 0; k < trace.excitation.size(); ++k)
    if (trace.excitation[k] > trace.excitation[arg]) arg = k;
  const auto asym = response::asymptotic_value(f, omega);
  out.summary = {{"peak_excitation", trace.excitation[arg]},
                 {"peak_time", trace.times[arg]},
                 {"asymptotic_abs", std::abs(asym)},
                 {"quadrature_error", trace.quadrature_error}};
  return out;
}

FigureOutput fig3(const fs::path& dir) {
  FigureOutput out;
  anharmonic::AnharmonicSpec spec;
  spec.omega = 1.0;
  spec.lambda = 1.0;
  spec.truncation = 16;
  const auto s = anharmonic::diagonalize(spec);
  io::write_file(dir / "spectrum.json", io::to_json(s));
  out.files.push_back(dir / "spectrum.json");

  csv::Table table;
  std::vector<double> n, gap;
  for (Eigen::Index k = 0; k < s.gaps.size(); ++k) {
    n.push_back(double(k + 1));
    gap.push_back(s.gaps(k));
  }
  table.add("n", n);
  table.add("gap", gap);
  csv::write(dir / "gaps.csv", table);
  out.files.push_back(dir / "gaps.csv");

  plot::PlotSpec p;
  p.title = "Transition energies, lambda = 1, N = 16";
  p.x_label = "n";
  p.y_label = "E_n - E_(n-1)";
  p.x_min = 1.0;
  p.x_max = 7.0;
  p.markers = true;
  p.series.push_back({{}, "n", "gap", "E_n - E_(n-1)", false, table});
  p.output = dir / "fig3.svg";
  plot::emit_plot(p);
  out.files.push_back(p.output);

  out.summary = {{"gaps", std::vector<double>(gap.begin(), gap.begin() + std::min<std::size_t>(7, gap.size()))},
                 {"converged", s.converged}};
  return out;
}

}  // namespace superosc::figures
