#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <optional>

#include "figures.hpp"
#include "plot.hpp"
#include "superosc/error.hpp"
#include "superosc/grid.hpp"
#include "superosc/io.hpp"
#include "superosc/signal.hpp"
#include "superosc/sweep.hpp"

namespace superosc::cli {

namespace fs = std::filesystem;
using json = io::json;

namespace {

struct Globals {
  std::string config;
  std::string out;
  std::optional<double> tol;
  std::string precision;
  std::string grid;
  bool quiet = false;
};

fs::path output_dir(const Globals& g) {
  if (!g.out.empty()) return g.out;
  if (const char* env = std::getenv("SUPEROSC_OUT_DIR"); env && *env) return env;
  return "superosc-out";
}

signal::Precision precision_of(const Globals& g) {
  return g.precision.empty() ? signal::Precision::Machine : io::precision_from_string(g.precision);
}

void report(const Globals& g, std::ostream& out, const json& summary,
            const std::vector<fs::path>& files) {
  if (g.quiet) return;
  out << io::canonical_dump(summary, 2) << '\n';
  for (const auto& f : files) out << "wrote " << f.string() << '\n';
}

// Manifest from --config (kind forced) with the global flags applied.
sweep::ExperimentManifest manifest_for(const Globals& g, const std::string& kind) {
  json j = json::object();
  fs::path base;
  if (!g.config.empty()) {
    j = io::read_file(g.config);
    base = fs::path(g.config).parent_path();
  }
  if (!j.is_object()) fail(ErrorKind::ValidationFailed, "config must be a JSON object");
  j["kind"] = kind;
  if (g.tol) {
    j["tolerances"]["quad_tol"] = *g.tol;
    j["tolerances"]["ode_tol"] = *g.tol;
  }
  if (!g.precision.empty()) j["tolerances"]["precision"] = g.precision;
  if (!g.grid.empty()) j["grid"] = g.grid;
  auto m = sweep::ExperimentManifest::from_json(j, base);
  m.output_root = output_dir(g);
  m.digest_directory = false;
  return m;
}

int run_manifest(const Globals& g, std::ostream& out, sweep::ExperimentManifest m) {
  const auto bundle = sweep::run_experiment(m);
  report(g, out, bundle.summary, bundle.files);
  return kExitOk;
}

int run_synthesize(const Globals& g, std::ostream& out) {
  if (g.config.empty()) fail(ErrorKind::ValidationFailed, "--config: a ConstraintSpec file is required");
  const auto spec = io::constraint_spec_from_json(io::read_file(g.config));
  spec.validate();
  signal::SolveOptions opt;
  opt.precision = precision_of(g);
  const auto f = signal::solve_min_norm(spec, opt);
  const auto window = signal::constraint_window(spec);
  const auto scan = signal::default_scan(f, window);
  TimeGrid grid = g.grid.empty() ? TimeGrid::uniform(scan.lo, scan.hi, std::min(0.01, 0.02 * std::numbers::pi / f.bandlimit()))
                                 : TimeGrid::parse(g.grid);
  const double step = grid.size() > 1 ? grid[1] - grid[0] : 0.01;
  const auto ch = signal::characterize(f, window, scan, step);

  const fs::path dir = output_dir(g);
  csv::Table t;
  std::vector<double> v;
  for (double x : grid.times()) v.push_back(f(x));
  t.add("t", std::vector<double>(grid.times().begin(), grid.times().end()));
  t.add("f", std::move(v));
  csv::write(dir / "signal.csv", t);
  io::write_file(dir / "signal.json", io::to_json(f));
  io::write_file(dir / "characterization.json", io::to_json(ch));
  json summary = io::to_json(ch);
  summary.erase("zero_crossings");
  summary["condition_number"] = f.condition_number();
  summary["precision"] = io::to_string(f.precision());
  summary["max_residual"] = f.max_residual();
  report(g, out, summary, {dir / "signal.csv", dir / "signal.json", dir / "characterization.json"});
  return kExitOk;
}

int run_sweep_command(const Globals& g, std::ostream& out, unsigned threads) {
  if (g.config.empty()) fail(ErrorKind::ValidationFailed, "--config: a sweep file is required");
  const json j = io::read_file(g.config);
  if (!j.is_object() || !j.contains("template"))
    fail(ErrorKind::ValidationFailed, "template: missing field");
  const fs::path base = fs::path(g.config).parent_path();
  json templ = j["template"];
  if (g.tol) {
    templ["tolerances"]["quad_tol"] = *g.tol;
    templ["tolerances"]["ode_tol"] = *g.tol;
  }
  if (!g.precision.empty()) templ["tolerances"]["precision"] = g.precision;
  if (!g.grid.empty()) templ["grid"] = g.grid;
  auto m = sweep::ExperimentManifest::from_json(templ, base);
  m.output_root = output_dir(g);
  std::vector<json> points;
  if (j.contains("points")) {
    if (!j["points"].is_array()) fail(ErrorKind::ValidationFailed, "points: expected an array");
    for (const auto& p : j["points"]) points.push_back(p);
  }
  const auto result = sweep::run_sweep(m, points, threads);
  const auto files = sweep::write_sweep(result, m.output_root);
  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += r.ok ? 0 : 1;
  report(g, out, {{"points", result.rows.size()}, {"failed", failed}}, files);
  return kExitOk;
}

int run_figure(const Globals& g, std::ostream& out, const std::string& which) {
  const fs::path dir = output_dir(g);
  figures::FigureOutput r;
  if (which == "fig1") r = figures::fig1(dir, precision_of(g));
  else if (which == "fig2") r = figures::fig2(dir, g.tol.value_or(1e-9), precision_of(g));
  else r = figures::fig3(dir);
  report(g, out, r.summary, r.files);
  return kExitOk;
}

int run_plot(const Globals& g, std::ostream& out) {
  if (g.config.empty()) fail(ErrorKind::ValidationFailed, "--config: a plot spec file is required");
  const json j = io::read_file(g.config);
  const fs::path base = fs::path(g.config).parent_path();
  plot::PlotSpec spec;
  if (!j.contains("series") || !j["series"].is_array())
    fail(ErrorKind::ValidationFailed, "series: expected an array");
  for (std::size_t i = 0; i < j["series"].size(); ++i) {
    const json& s = j["series"][i];
    const std::string path = "series[" + std::to_string(i) + "]";
    for (const char* key : {"csv", "x", "y"})
      if (!s.contains(key) || !s[key].is_string())
        fail(ErrorKind::ValidationFailed, path + "." + key + ": expected a string");
    plot::Series series;
    series.csv = s["csv"].get<std::string>();
    if (series.csv.is_relative()) series.csv = base / series.csv;
    series.x_column = s["x"].get<std::string>();
    series.y_column = s["y"].get<std::string>();
    series.label = s.value("label", "");
    series.abs_value = s.value("abs", false);
    spec.series.push_back(std::move(series));
  }
  spec.title = j.value("title", "");
  spec.x_label = j.value("x_label", "");
  spec.y_label = j.value("y_label", "");
  spec.log_x = j.value("log_x", false);
  spec.log_y = j.value("log_y", false);
  spec.markers = j.value("markers", false);
  spec.output = output_dir(g) / j.value("output", "plot.svg");
  plot::emit_plot(spec);
  report(g, out, {{"output", spec.output.string()}}, {spec.output});
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"superosc: bandlimited superoscillating drives for oscillators and few-level systems"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON input (manifest, spec or plot description)");
  app.add_option("--out", g.out, "output directory (default $SUPEROSC_OUT_DIR or ./superosc-out)");
  app.add_option("--tol", g.tol, "quadrature and ODE tolerance");
  app.add_option("--precision", g.precision, "linear-solve precision")
      ->check(CLI::IsMember({"machine", "extended"}));
  app.add_option("--grid", g.grid, "time grid start:stop:step");
  app.add_flag("--quiet", g.quiet, "suppress the summary on stdout");

  auto* synth = app.add_subcommand("synthesize", "ConstraintSpec JSON -> signal JSON, CSV and characterization");

  std::optional<double> omega;
  auto* respond = app.add_subcommand("respond", "partial Fourier transform S_omega(t) of a signal");
  respond->add_option("--omega", omega, "probe frequency");

  auto* nlevel = app.add_subcommand("nlevel", "drive an N-level system with a signal");
  std::optional<double> delta;
  nlevel->add_option("--delta", delta, "coupling strength");

  auto* anh = app.add_subcommand("anharmonic", "quartic anharmonic oscillator");
  anh->require_subcommand(1);
  std::optional<double> lambda;
  std::optional<std::size_t> truncation;
  anh->add_option("--omega", omega, "base frequency");
  anh->add_option("--lambda", lambda, "quartic coupling");
  anh->add_option("--N", truncation, "truncation size");
  auto* anh_spec = anh->add_subcommand("spectrum", "eigenvalues, gaps and position matrix");
  auto* anh_classical = anh->add_subcommand("classical", "first-order classical response q0, q1");
  auto* anh_drive = anh->add_subcommand("drive", "drive the truncated quantum oscillator");
  anh_drive->add_option("--delta", delta, "coupling strength");

  auto* disp = app.add_subcommand("dispersive", "fourth-order oscillator roots and driven response");
  std::optional<double> k_spring, scale;
  disp->add_option("--k", k_spring, "spring constant");
  disp->add_option("--Lambda", scale, "new physics scale");

  auto* para = app.add_subcommand("parametric", "mode equation with time-dependent frequency");
  para->require_subcommand(1);
  std::optional<double> omega0, depth, envelope;
  std::string frequencies;
  auto* para_scan = para->add_subcommand("scan", "|beta|^2 against modulation frequency");
  para_scan->add_option("--omega0", omega0, "background frequency");
  para_scan->add_option("--depth", depth, "modulation depth");
  para_scan->add_option("--envelope-width", envelope, "Gaussian envelope width");
  para_scan->add_option("--frequencies", frequencies, "modulation grid start:stop:step");
  para->add_subcommand("single", "integrate one profile and extract alpha, beta");

  auto* sw = app.add_subcommand("sweep", "run a manifest template over a grid of overrides");
  unsigned threads = 0;
  sw->add_option("--threads", threads, "worker threads (0 = all cores)");

  auto* fig = app.add_subcommand("figure", "reproduce a figure");
  fig->require_subcommand(1);
  auto* fig1 = fig->add_subcommand("fig1", "superoscillating signal");
  auto* fig2 = fig->add_subcommand("fig2", "partial Fourier transform at omega = pi");
  fig->add_subcommand("fig3", "anharmonic transition energies");

  auto* plt = app.add_subcommand("plot", "render a PlotSpec JSON to SVG");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (synth->parsed()) return run_synthesize(g, out);
    if (respond->parsed()) {
      auto m = manifest_for(g, "respond");
      if (omega) m.parameters["omega"] = *omega;
      return run_manifest(g, out, m);
    }
    if (nlevel->parsed()) {
      auto m = manifest_for(g, "nlevel");
      if (delta) m.parameters["delta"] = *delta;
      return run_manifest(g, out, m);
    }
    if (anh->parsed()) {
      auto m = manifest_for(g, "anharmonic");
      if (omega) m.parameters["omega"] = *omega;
      if (lambda) m.parameters["lambda"] = *lambda;
      if (truncation) m.parameters["truncation"] = *truncation;
      if (delta) m.parameters["delta"] = *delta;
      m.parameters["mode"] = anh_spec->parsed() ? "spectrum" : anh_classical->parsed() ? "classical" : "drive";
      return run_manifest(g, out, m);
    }
    if (disp->parsed()) {
      auto m = manifest_for(g, "dispersive");
      if (k_spring) m.parameters["k"] = *k_spring;
      if (scale) m.parameters["Lambda"] = *scale;
      return run_manifest(g, out, m);
    }
    if (para->parsed()) {
      auto m = manifest_for(g, "parametric");
      m.parameters["mode"] = para_scan->parsed() ? "scan" : "single";
      if (omega0) m.parameters["omega0"] = *omega0;
      if (depth) m.parameters["depth"] = *depth;
      if (envelope) m.parameters["envelope_width"] = *envelope;
      if (!frequencies.empty()) m.parameters["frequencies"] = frequencies;
      return run_manifest(g, out, m);
    }
    if (sw->parsed()) return run_sweep_command(g, out, threads);
    if (fig->parsed()) return run_figure(g, out, fig1->parsed() ? "fig1" : fig2->parsed() ? "fig2" : "fig3");
    if (plt->parsed()) return run_plot(g, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.message() << '\n';
    return is_validation_error(e.kind()) ? kExitValidation : kExitNumerical;
  } catch (const json::exception& e) {
    err << "error [ValidationFailed]: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error [ValidationFailed]: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  err << app.help();
  return kExitValidation;
}

}  // namespace superosc::cli
