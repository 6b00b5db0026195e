#include "superosc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "superosc/anharmonic.hpp"
#include "superosc/dispersive.hpp"
#include "superosc/error.hpp"
#include "superosc/grid.hpp"
#include "superosc/nlevel.hpp"
#include "superosc/parametric.hpp"
#include "superosc/response.hpp"
#include "superosc/signal.hpp"

namespace superosc::sweep {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kKinds = {"respond", "nlevel", "anharmonic", "dispersive",
                                      "parametric"};

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::ValidationFailed, path + ": " + what);
}

json resolve_input(const ExperimentManifest& m, const std::string& name) {
  if (!m.inputs.contains(name)) bad("inputs." + name, "missing input");
  const json& v = m.inputs[name];
  if (v.is_string()) {
    fs::path p = v.get<std::string>();
    if (p.is_relative()) p = m.base_dir / p;
    if (!fs::exists(p)) bad("inputs." + name, "file not found: " + p.string());
    return io::read_file(p);
  }
  if (!v.is_object()) bad("inputs." + name, "expected a file path or an object");
  return v;
}

// Re-raises reader errors with the input's path in front of the field name.
template <class F>
auto read_input(const std::string& name, F&& read) {
  try {
    return read();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ValidationFailed) throw;
    fail(ErrorKind::ValidationFailed, "inputs." + name + "." + e.message());
  }
}

json resolved_inputs(const ExperimentManifest& m) {
  json out = json::object();
  for (auto it = m.inputs.begin(); it != m.inputs.end(); ++it)
    out[it.key()] = resolve_input(m, it.key());
  return out;
}

double param(const json& params, const std::string& key, std::optional<double> fallback = {}) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    bad("parameters." + key, "missing field");
  }
  const json& v = params[key];
  if (!v.is_number() || !std::isfinite(v.get<double>())) bad("parameters." + key, "expected a finite number");
  return v.get<double>();
}

std::string param_string(const json& params, const std::string& key, const std::string& fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_string()) bad("parameters." + key, "expected a string");
  return params[key].get<std::string>();
}

std::size_t param_index(const json& params, const std::string& key, std::size_t fallback) {
  const double v = param(params, key, static_cast<double>(fallback));
  if (v < 0 || v != std::floor(v)) bad("parameters." + key, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

struct Tolerances {
  double quad_tol = 1e-9;
  double ode_tol = 1e-10;
  signal::Precision precision = signal::Precision::Machine;
};

Tolerances tolerances(const ExperimentManifest& m) {
  Tolerances t;
  const json& j = m.tolerances;
  if (!j.is_object()) bad("tolerances", "expected an object");
  t.quad_tol = io::number_or(j, "quad_tol", t.quad_tol, "tolerances");
  t.ode_tol = io::number_or(j, "ode_tol", t.ode_tol, "tolerances");
  if (t.quad_tol <= 0.0) bad("tolerances.quad_tol", "must be positive");
  if (t.ode_tol <= 0.0) bad("tolerances.ode_tol", "must be positive");
  if (j.contains("precision")) {
    if (!j["precision"].is_string()) bad("tolerances.precision", "expected a string");
    t.precision = io::precision_from_string(j["precision"].get<std::string>());
  }
  return t;
}

TimeGrid grid_of(const ExperimentManifest& m) {
  if (m.grid.empty()) bad("grid", "a time grid is required for kind '" + m.kind + "'");
  try {
    return TimeGrid::parse(m.grid);
  } catch (const Error& e) {
    bad("grid", e.what());
  }
}

signal::SincExpansion load_signal(const json& content, const Tolerances& tol) {
  if (content.contains("weights")) return io::sinc_expansion_from_json(content);
  const signal::ConstraintSpec spec = io::constraint_spec_from_json(content);
  spec.validate();
  signal::SolveOptions opt;
  opt.precision = tol.precision;
  return signal::solve_min_norm(spec, opt);
}

response::QuadratureSettings quad_settings(const Tolerances& tol) {
  response::QuadratureSettings s;
  s.tol_per_unit = tol.quad_tol;
  return s;
}

struct Writer {
  fs::path dir;
  std::vector<fs::path>* files;

  void table(const std::string& name, const csv::Table& t) {
    csv::write(dir / name, t);
    files->push_back(dir / name);
  }
  void object(const std::string& name, const json& j) {
    io::write_file(dir / name, j);
    files->push_back(dir / name);
  }
};

csv::Table amplitude_table(const nlevel::AmplitudeTrace& tr) {
  csv::Table t;
  t.add("t", tr.times);
  const std::size_t levels = tr.coefficients.empty() ? 0 : static_cast<std::size_t>(tr.coefficients[0].size());
  for (std::size_t m = 0; m < levels; ++m) {
    std::vector<double> re, im, pop;
    for (const auto& c : tr.coefficients) {
      const auto v = c(static_cast<Eigen::Index>(m));
      re.push_back(v.real());
      im.push_back(v.imag());
      pop.push_back(std::norm(v));
    }
    const std::string s = std::to_string(m);
    t.add("re_c" + s, std::move(re));
    t.add("im_c" + s, std::move(im));
    t.add("p" + s, std::move(pop));
  }
  return t;
}

void amplitude_summary(const nlevel::AmplitudeTrace& tr, json& summary) {
  summary["norm_drift"] = tr.norm_drift;
  summary["ode_steps"] = tr.stats.accepted;
  if (tr.coefficients.empty()) return;
  const auto& last = tr.coefficients.back();
  for (Eigen::Index m = 0; m < last.size(); ++m)
    summary["final_p" + std::to_string(m)] = std::norm(last(m));
}

void run_respond(const ExperimentManifest& m, const json& inputs, Writer& w, json& summary) {
  const Tolerances tol = tolerances(m);
  const TimeGrid grid = grid_of(m);
  const signal::SincExpansion J = read_input("signal", [&] { return load_signal(inputs["signal"], tol); });
  const double omega = param(m.parameters, "omega");
  if (omega <= 0.0) bad("parameters.omega", "must be positive");
  const std::string lower = param_string(m.parameters, "lower", "minus_infinity");
  if (lower != "minus_infinity" && lower != "grid_start")
    bad("parameters.lower", "expected 'minus_infinity' or 'grid_start'");
  const auto trace = response::partial_fourier(
      J, omega, grid, quad_settings(tol),
      lower == "grid_start" ? response::LowerLimit::GridStart : response::LowerLimit::MinusInfinity);

  csv::Table t;
  t.add("t", trace.times);
  std::vector<double> re, im;
  for (auto v : trace.amplitudes) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  t.add("re_S", std::move(re));
  t.add("im_S", std::move(im));
  t.add("excitation", trace.excitation);
  w.table("response.csv", t);
  w.object("signal.json", io::to_json(J));

  const auto peak = std::max_element(trace.excitation.begin(), trace.excitation.end());
  const auto asym = response::asymptotic_value(J, omega);
  summary["omega"] = omega;
  if (peak != trace.excitation.end()) {
    summary["peak_excitation"] = *peak;
    summary["peak_time"] = trace.times[static_cast<std::size_t>(peak - trace.excitation.begin())];
    summary["final_excitation"] = trace.excitation.back();
  }
  summary["asymptotic_re"] = asym.real();
  summary["asymptotic_im"] = asym.imag();
  summary["asymptotic_excitation"] = std::norm(asym);
  summary["quadrature_error"] = trace.quadrature_error;
  summary["tail_error_bound"] = trace.tail_error_bound;
}

nlevel::QuantumSystemSpec system_of(const ExperimentManifest& m, const json& inputs) {
  nlevel::QuantumSystemSpec sys;
  if (inputs.contains("system")) {
    sys = read_input("system", [&] { return io::quantum_system_from_json(inputs["system"]); });
  } else if (m.parameters.contains("ladder")) {
    const json& l = m.parameters["ladder"];
    const double levels = io::number_at(l, "levels", "parameters.ladder");
    const double omega = io::number_at(l, "omega", "parameters.ladder");
    if (levels < 2 || levels != std::floor(levels)) bad("parameters.ladder.levels", "expected an integer >= 2");
    sys = nlevel::harmonic_ladder(static_cast<std::size_t>(levels), omega, 0.0);
  } else {
    bad("inputs.system", "missing input (or parameters.ladder)");
  }
  if (m.parameters.contains("delta")) sys.delta = param(m.parameters, "delta");
  sys.validate();
  return sys;
}

void drive_system(const ExperimentManifest& m, const nlevel::QuantumSystemSpec& sys,
                  const signal::SincExpansion& J, const TimeGrid& grid, const Tolerances& tol,
                  Writer& w, json& summary) {
  const std::size_t initial = param_index(m.parameters, "initial", 0);
  if (initial >= sys.levels()) bad("parameters.initial", "level out of range");
  const std::string method = param_string(m.parameters, "method", "exact");
  if (method != "exact" && method != "perturbative" && method != "both")
    bad("parameters.method", "expected 'exact', 'perturbative' or 'both'");

  std::optional<nlevel::AmplitudeTrace> exact;
  if (method != "perturbative") {
    exact = nlevel::integrate_exact(sys, J, initial, grid, tol.ode_tol);
    w.table("amplitudes.csv", amplitude_table(*exact));
    amplitude_summary(*exact, summary);
  }
  if (method != "exact") {
    const std::size_t target = param_index(m.parameters, "final", initial == 0 ? 1 : 0);
    if (target >= sys.levels()) bad("parameters.final", "level out of range");
    const auto c = nlevel::perturbative_amplitude(sys, J, initial, target, grid, quad_settings(tol));
    csv::Table t;
    t.add("t", std::vector<double>(grid.times().begin(), grid.times().end()));
    std::vector<double> re, im;
    for (auto v : c) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    t.add("re_c", std::move(re));
    t.add("im_c", std::move(im));
    w.table("perturbative.csv", t);
    summary["perturbative_final_abs"] = c.empty() ? 0.0 : std::abs(c.back());
    if (exact) {
      double err = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k)
        err = std::max(err, std::abs(exact->coefficients[k](static_cast<Eigen::Index>(target)) - c[k]));
      summary["first_order_error"] = err;
    }
  }
  summary["delta"] = sys.delta;
}

void run_nlevel(const ExperimentManifest& m, const json& inputs, Writer& w, json& summary) {
  const Tolerances tol = tolerances(m);
  const TimeGrid grid = grid_of(m);
  const signal::SincExpansion J = read_input("signal", [&] { return load_signal(inputs["signal"], tol); });
  const nlevel::QuantumSystemSpec sys = system_of(m, inputs);
  drive_system(m, sys, J, grid, tol, w, summary);
}

void run_anharmonic(const ExperimentManifest& m, const json& inputs, Writer& w, json& summary) {
  const Tolerances tol = tolerances(m);
  const anharmonic::AnharmonicSpec spec = io::anharmonic_spec_from_json(m.parameters);
  spec.validate();
  const std::string mode = param_string(m.parameters, "mode", "spectrum");
  if (mode == "spectrum") {
    const auto s = anharmonic::diagonalize(spec);
    w.object("spectrum.json", io::to_json(s));
    csv::Table t;
    std::vector<double> n, gaps;
    for (Eigen::Index k = 0; k < s.gaps.size(); ++k) {
      n.push_back(static_cast<double>(k + 1));
      gaps.push_back(s.gaps(k));
    }
    t.add("n", std::move(n));
    t.add("gap", std::move(gaps));
    w.table("gaps.csv", t);
    summary["ground_energy"] = s.eigenvalues(0);
    summary["converged"] = s.converged;
    summary["convergence_change"] = s.convergence_change;
    return;
  }
  const TimeGrid grid = grid_of(m);
  const signal::SincExpansion J = read_input("signal", [&] { return load_signal(inputs["signal"], tol); });
  if (mode == "classical") {
    anharmonic::ClassicalSettings cs;
    cs.quadrature = quad_settings(tol);
    cs.horizon = param(m.parameters, "horizon", 0.0);
    const auto r = anharmonic::classical_perturbative(spec, J, grid, cs);
    csv::Table t;
    t.add("t", r.times);
    t.add("q0", r.q0);
    t.add("q1", r.q1);
    w.table("classical.csv", t);
    summary["q0_asymptotic_amplitude"] = r.q0_asymptotic_amplitude;
    summary["q1_asymptotic_amplitude"] = r.q1_asymptotic_amplitude;
    summary["q0_cubed_spectrum_re"] = r.q0_cubed_spectrum_at_omega.real();
    summary["q0_cubed_spectrum_im"] = r.q0_cubed_spectrum_at_omega.imag();
    summary["tail_bound"] = r.tail_bound;
    summary["quadrature_error"] = r.quadrature_error;
    return;
  }
  if (mode == "drive") {
    const auto s = anharmonic::diagonalize(spec);
    const auto sys = anharmonic::to_quantum_system(s, param(m.parameters, "delta"));
    w.object("spectrum.json", io::to_json(s));
    drive_system(m, sys, J, grid, tol, w, summary);
    return;
  }
  bad("parameters.mode", "expected 'spectrum', 'classical' or 'drive'");
}

void run_dispersive(const ExperimentManifest& m, const json& inputs, Writer& w, json& summary) {
  const Tolerances tol = tolerances(m);
  const auto roots = dispersive::solve_dispersion(param(m.parameters, "k"), param(m.parameters, "Lambda"));
  w.object("roots.json", io::to_json(roots));
  summary["branch"] = roots.real() ? (roots.branch == dispersive::RootBranch::Real ? "real" : "degenerate") : "complex";
  if (!roots.real()) return;
  summary["omega1"] = roots.omega1;
  summary["omega2"] = roots.omega2;
  if (!inputs.contains("signal")) return;

  const TimeGrid grid = grid_of(m);
  const signal::SincExpansion J = read_input("signal", [&] { return load_signal(inputs["signal"], tol); });
  const std::string path = param_string(m.parameters, "path", "green");
  if (path != "green" && path != "band" && path != "both")
    bad("parameters.path", "expected 'green', 'band' or 'both'");
  csv::Table t;
  t.add("t", std::vector<double>(grid.times().begin(), grid.times().end()));
  std::optional<dispersive::DispersiveTrace> green, band;
  if (path != "band") {
    green = dispersive::driven_response_green(roots, J, grid, quad_settings(tol));
    t.add("q", green->q);
  }
  if (path != "green") {
    band = dispersive::driven_response(roots, J, grid, std::min(tol.quad_tol, 1e-12));
    t.add(green ? "q_band" : "q", band->q);
  }
  w.table("response.csv", t);
  const auto& q = green ? green->q : band->q;
  double peak = 0.0;
  for (double v : q) peak = std::max(peak, std::abs(v));
  summary["peak_abs_q"] = peak;
  summary["final_abs_q"] = q.empty() ? 0.0 : std::abs(q.back());
  if (green && band) {
    double diff = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) diff = std::max(diff, std::abs(green->q[k] - band->q[k]));
    summary["path_difference"] = diff;
  }
}

parametric::FrequencyProfile profile_of(const ExperimentManifest& m, const json& inputs) {
  if (inputs.contains("profile"))
    return read_input("profile", [&] { return io::profile_from_json(inputs["profile"]); });
  if (m.parameters.contains("profile")) {
    try {
      return io::profile_from_json(m.parameters["profile"]);
    } catch (const Error& e) {
      bad("parameters.profile", e.what());
    }
  }
  bad("inputs.profile", "missing input (or parameters.profile)");
}

std::vector<double> frequency_list(const json& params) {
  if (!params.contains("frequencies")) bad("parameters.frequencies", "missing field");
  const json& f = params["frequencies"];
  std::vector<double> out;
  if (f.is_array()) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (!f[i].is_number()) bad("parameters.frequencies[" + std::to_string(i) + "]", "expected a number");
      out.push_back(f[i].get<double>());
    }
    return out;
  }
  if (f.is_string()) {
    const TimeGrid g = TimeGrid::parse(f.get<std::string>());
    return {g.times().begin(), g.times().end()};
  }
  bad("parameters.frequencies", "expected an array or 'start:stop:step'");
}

void run_parametric(const ExperimentManifest& m, const json& inputs, Writer& w, json& summary) {
  const Tolerances tol = tolerances(m);
  const std::string mode = param_string(m.parameters, "mode", "single");
  if (mode == "scan") {
    const double omega0 = param(m.parameters, "omega0");
    const double depth = param(m.parameters, "depth");
    const double width = param(m.parameters, "envelope_width");
    parametric::ScanOptions so;
    so.ode_tol = param(m.parameters, "ode_tol", std::min(tol.ode_tol, 1e-11));
    so.half_span_widths = param(m.parameters, "half_span_widths", so.half_span_widths);
    const auto scan = parametric::resonance_scan(omega0, depth, width, frequency_list(m.parameters), so);
    csv::Table t;
    std::vector<double> nu, b2, res, ok;
    for (const auto& p : scan.points) {
      nu.push_back(p.mod_frequency);
      b2.push_back(p.ok ? p.beta_sq : std::numeric_limits<double>::quiet_NaN());
      res.push_back(p.ok ? p.normalization_residual : std::numeric_limits<double>::quiet_NaN());
      ok.push_back(p.ok ? 1.0 : 0.0);
    }
    t.add("mod_frequency", std::move(nu));
    t.add("beta_sq", std::move(b2));
    t.add("normalization_residual", std::move(res));
    t.add("ok", std::move(ok));
    w.table("scan.csv", t);
    if (scan.argmax) {
      summary["argmax_frequency"] = scan.points[*scan.argmax].mod_frequency;
      summary["max_beta_sq"] = scan.points[*scan.argmax].beta_sq;
    }
    if (scan.secondary) summary["secondary_frequency"] = scan.points[*scan.secondary].mod_frequency;
    std::size_t failed = 0;
    for (const auto& p : scan.points) failed += p.ok ? 0 : 1;
    summary["failed_points"] = failed;
    return;
  }
  if (mode != "single") bad("parameters.mode", "expected 'single' or 'scan'");
  const parametric::FrequencyProfile profile = profile_of(m, inputs);
  const auto bounds = profile.static_bounds(0.1 * parametric::kFlatnessThreshold);
  const double t0 = param(m.parameters, "t_start", bounds.first == bounds.second ? 0.0 : bounds.first);
  const double t1 = param(m.parameters, "t_end", bounds.first == bounds.second ? 100.0 : bounds.second);
  parametric::ModeOptions mo;
  mo.ode_tol = param(m.parameters, "ode_tol", std::min(tol.ode_tol, 1e-11));
  mo.samples = param_index(m.parameters, "samples", mo.samples);
  const auto trace = parametric::integrate_mode(profile, t0, t1, mo);
  const auto bp = parametric::extract_bogoliubov(trace, profile);
  csv::Table t;
  t.add("t", trace.times);
  std::vector<double> rq, iq, rdq, idq;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    rq.push_back(trace.q[k].real());
    iq.push_back(trace.q[k].imag());
    rdq.push_back(trace.dq[k].real());
    idq.push_back(trace.dq[k].imag());
  }
  t.add("re_q", std::move(rq));
  t.add("im_q", std::move(iq));
  t.add("re_dq", std::move(rdq));
  t.add("im_dq", std::move(idq));
  w.table("mode.csv", t);
  w.object("bogoliubov.json", io::to_json(bp));
  summary["beta_sq"] = bp.excitation();
  summary["abs_alpha"] = std::abs(bp.alpha);
  summary["abs_beta"] = std::abs(bp.beta);
  summary["normalization_residual"] = bp.normalization_residual;
  summary["wronskian_drift"] = trace.wronskian_drift;
}

void flatten(const json& j, const std::string& prefix, std::map<std::string, double>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_number()) {
    out[prefix] = j.get<double>();
  } else if (j.is_boolean()) {
    out[prefix] = j.get<bool>() ? 1.0 : 0.0;
  }
}

}  // namespace

ExperimentManifest ExperimentManifest::from_json(const json& j, fs::path base_dir) {
  if (!j.is_object()) bad("<root>", "manifest must be an object");
  ExperimentManifest m;
  if (!j.contains("kind") || !j["kind"].is_string()) bad("kind", "missing or not a string");
  m.kind = j["kind"].get<std::string>();
  if (!kKinds.count(m.kind)) bad("kind", "unknown experiment kind '" + m.kind + "'");
  for (const char* key : {"inputs", "parameters", "tolerances"}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_object()) bad(key, "expected an object");
  }
  if (j.contains("inputs")) m.inputs = j["inputs"];
  if (j.contains("parameters")) m.parameters = j["parameters"];
  if (j.contains("tolerances")) m.tolerances = j["tolerances"];
  if (j.contains("grid")) {
    if (!j["grid"].is_string()) bad("grid", "expected 'start:stop:step'");
    m.grid = j["grid"].get<std::string>();
  }
  if (j.contains("output_root")) {
    if (!j["output_root"].is_string()) bad("output_root", "expected a path");
    m.output_root = j["output_root"].get<std::string>();
  }
  m.base_dir = std::move(base_dir);
  return m;
}

ExperimentManifest ExperimentManifest::load(const fs::path& path) {
  return from_json(io::read_file(path), path.parent_path());
}

json ExperimentManifest::to_json() const {
  json j = {{"kind", kind}, {"inputs", inputs}, {"parameters", parameters}, {"tolerances", tolerances}};
  if (!grid.empty()) j["grid"] = grid;
  return j;
}

std::string manifest_digest(const ExperimentManifest& m) {
  json j = m.to_json();
  j["inputs"] = resolved_inputs(m);
  return io::digest(j);
}

OutputBundle run_experiment(const ExperimentManifest& m) {
  if (!kKinds.count(m.kind)) bad("kind", "unknown experiment kind '" + m.kind + "'");
  const auto started = std::chrono::steady_clock::now();
  OutputBundle out;
  const json inputs = resolved_inputs(m);
  for (auto it = inputs.begin(); it != inputs.end(); ++it)
    out.input_digests[it.key()] = io::digest(it.value());
  json resolved = m.to_json();
  resolved["inputs"] = inputs;
  out.digest = io::digest(resolved);
  out.directory = m.digest_directory ? m.output_root / (m.kind + "-" + out.digest.substr(0, 12))
                                     : m.output_root;
  fs::create_directories(out.directory);

  Writer w{out.directory, &out.files};
  const bool needs_signal = m.kind == "respond" || m.kind == "nlevel" ||
                            (m.kind == "anharmonic" && m.parameters.value("mode", "spectrum") != "spectrum");
  if (needs_signal && !inputs.contains("signal")) bad("inputs.signal", "missing input");
  try {
    if (m.kind == "respond") run_respond(m, inputs, w, out.summary);
    else if (m.kind == "nlevel") run_nlevel(m, inputs, w, out.summary);
    else if (m.kind == "anharmonic") run_anharmonic(m, inputs, w, out.summary);
    else if (m.kind == "dispersive") run_dispersive(m, inputs, w, out.summary);
    else run_parametric(m, inputs, w, out.summary);
  } catch (const Error& e) {
    if (is_validation_error(e.kind())) throw;
    throw Error(e.kind(), m.kind + " experiment: " + e.what());
  }
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  json manifest = m.to_json();
  manifest["digest"] = out.digest;
  manifest["input_digests"] = out.input_digests;
  json names = json::array();
  for (const auto& f : out.files) names.push_back(f.filename().string());
  names.push_back("summary.json");
  manifest["outputs"] = names;
  manifest["timing"] = {{"elapsed_seconds", out.elapsed_seconds}};
  io::write_file(out.directory / "summary.json", out.summary);
  out.files.push_back(out.directory / "summary.json");
  io::write_file(out.directory / "manifest.json", manifest);
  out.files.push_back(out.directory / "manifest.json");
  return out;
}

SweepResult run_sweep(const ExperimentManifest& templ, const std::vector<json>& overrides,
                      unsigned threads) {
  SweepResult result;
  result.rows.resize(overrides.size());
  if (overrides.empty()) return result;
  const json base = templ.to_json();

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < overrides.size(); k = next++) {
      SweepRow& row = result.rows[k];
      row.overrides = overrides[k];
      try {
        json patched = base;
        patched.merge_patch(overrides[k]);
        ExperimentManifest m = ExperimentManifest::from_json(patched, templ.base_dir);
        m.output_root = templ.output_root;
        m.digest_directory = true;
        row.bundle = run_experiment(m);
        row.ok = true;
      } catch (const Error& e) {
        row.error = e.what();
        row.error_kind = std::string(to_string(e.kind()));
      } catch (const std::exception& e) {
        row.error = e.what();
        row.error_kind = "ValidationFailed";
      }
    }
  };
  unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, overrides.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

json SweepResult::to_json() const {
  json rows_json = json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const SweepRow& r = rows[k];
    json row = {{"point", k}, {"overrides", r.overrides}, {"ok", r.ok}};
    if (r.ok) {
      row["summary"] = r.bundle.summary;
      row["directory"] = r.bundle.directory.filename().string();
      row["digest"] = r.bundle.digest;
    } else {
      row["error"] = r.error;
      row["error_kind"] = r.error_kind;
    }
    rows_json.push_back(std::move(row));
  }
  return {{"rows", rows_json}};
}

csv::Table SweepResult::table() const {
  std::vector<std::map<std::string, double>> over(rows.size()), summ(rows.size());
  std::set<std::string> over_keys, summ_keys;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    flatten(rows[k].overrides, "", over[k]);
    if (rows[k].ok) flatten(rows[k].bundle.summary, "", summ[k]);
    for (const auto& [key, v] : over[k]) over_keys.insert(key);
    for (const auto& [key, v] : summ[k]) summ_keys.insert(key);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  csv::Table t;
  std::vector<double> point, ok;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    point.push_back(static_cast<double>(k));
    ok.push_back(rows[k].ok ? 1.0 : 0.0);
  }
  t.add("point", std::move(point));
  t.add("ok", std::move(ok));
  auto add_group = [&](const std::set<std::string>& keys,
                       const std::vector<std::map<std::string, double>>& vals) {
    for (const auto& key : keys) {
      std::vector<double> col;
      for (const auto& row : vals) {
        auto it = row.find(key);
        col.push_back(it == row.end() ? nan : it->second);
      }
      t.add(key, std::move(col));
    }
  };
  add_group(over_keys, over);
  add_group(summ_keys, summ);
  return t;
}

std::vector<fs::path> write_sweep(const SweepResult& result, const fs::path& directory) {
  fs::create_directories(directory);
  io::write_file(directory / "sweep.json", result.to_json());
  csv::write(directory / "sweep.csv", result.table());
  return {directory / "sweep.json", directory / "sweep.csv"};
}

}  // namespace superosc::sweep
