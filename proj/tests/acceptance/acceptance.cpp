// One line per criterion; exit status is the number of failures (capped).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "figures.hpp"
#include "superosc/anharmonic.hpp"
#include "superosc/dispersive.hpp"
#include "superosc/error.hpp"
#include "superosc/harmonic.hpp"
#include "superosc/nlevel.hpp"
#include "superosc/parametric.hpp"
#include "superosc/response.hpp"

using namespace superosc;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[x] ");
    detail += buf;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  failures += o.pass ? 0 : 1;
  std::printf("%s  %2d  %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

signal::SincExpansion example_signal() { return signal::solve_min_norm(figures::example_constraints()); }

// Same drive evaluated without the library, for the ODE oracles.
double single_sinc(double band, double t) {
  return std::abs(t) < 1e-9 ? band / pi : std::sin(band * t) / (pi * t);
}

template <class F>
void rk4(F&& rhs, double& t, std::vector<double>& y, double t1, double h) {
  const int steps = static_cast<int>(std::ceil((t1 - t) / h));
  const double dt = (t1 - t) / steps;
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (int s = 0; s < steps; ++s) {
    rhs(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    rhs(t + 0.5 * dt, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    rhs(t + 0.5 * dt, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
    rhs(t + dt, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) y[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    t += dt;
  }
  t = t1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome signal_figure() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto f = example_signal();
  const signal::Interval window{-4.0, 4.0};
  const auto ch = signal::characterize(f, window, signal::default_scan(f, window), 1e-3);
  const double runtime = seconds_since(t0);
  const auto& z = ch.zero_crossings;
  const double spacing = z.size() > 1 ? (z.back() - z.front()) / double(z.size() - 1) : NAN;
  o.check(std::abs(spacing - 1.0) <= 0.1, "zero spacing %.4f (want 1.0 +- 0.1, %zu crossings)", spacing,
          z.size());
  o.check(ch.dynamic_range >= 1e10 && ch.dynamic_range <= 1e12,
          "dynamic range %.4g (want [1e10, 1e12]; peak %.4g at %.3f over %.4g inside)", ch.dynamic_range,
          ch.peak_outside, ch.peak_outside_time, ch.peak_inside);
  o.check(runtime < 1.0, "runtime %.3f s", runtime);
  return o;
}

Outcome response_figure() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto f = example_signal();
  const auto grid = TimeGrid::uniform(-40.0, 40.0, 0.05);
  const auto tr = response::partial_fourier(f, pi, grid, 1e-9);
  const auto it = std::max_element(tr.excitation.begin(), tr.excitation.end());
  const double peak = *it, t_peak = tr.times[std::size_t(it - tr.excitation.begin())];
  const auto ends = response::partial_fourier(f, pi, TimeGrid(std::vector<double>{-30.0, 30.0}), 1e-9);
  const double runtime = seconds_since(t0);
  o.check(std::abs(t_peak) <= 4.0, "global max %.6g at t = %.3f (want inside [-4, 4])", peak, t_peak);
  const double ratio = std::max(ends.excitation[0], ends.excitation[1]) / peak;
  o.check(ratio <= 1e-4, "|S|^2(+-30) = %.4g, %.4g -> ratio %.3g (want <= 1e-4)", ends.excitation[0],
          ends.excitation[1], ratio);
  const auto asym = response::asymptotic_value(f, pi);
  o.check(asym == response::cplx(0.0, 0.0), "asymptotic value (%g, %g)", asym.real(), asym.imag());
  o.check(runtime < 10.0, "runtime %.3f s", runtime);
  return o;
}

Outcome harmonic_cross_check() {
  Outcome o;
  const auto J = example_signal().scaled(1e-3);
  const double omega = pi;
  const auto grid = TimeGrid::uniform(-12.0, 12.0, 0.5);
  harmonic::HarmonicOptions opt;
  opt.lower = response::LowerLimit::GridStart;
  opt.max_level = 11;
  opt.quadrature.tol_per_unit = 1e-11;
  const auto closed = harmonic::closed_form_coefficients(J, omega, grid, opt);
  const auto ladder = nlevel::harmonic_ladder(12, omega, 1.0);
  const auto exact = nlevel::integrate_exact(ladder, J, 0, grid, 1e-12);
  double worst = 0.0, peak_n = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    peak_n = std::max(peak_n, closed.trace.excitation[k]);
    for (std::size_t n = 0; n < 12; ++n)
      worst = std::max(worst, std::abs(closed.level_amplitudes[k][n] - exact.coefficients[k](long(n))));
  }
  o.check(worst <= 1e-6, "max |c_closed - c_ode| = %.3g over %zu times (peak <N> %.3g)", worst,
          grid.size(), peak_n);
  return o;
}

Outcome poisson_normalisation() {
  Outcome o;
  const auto J = example_signal().scaled(0.03);
  const auto grid = TimeGrid::uniform(-40.0, 40.0, 0.5);
  harmonic::HarmonicOptions opt;
  opt.quadrature.tol_per_unit = 1e-10;
  const auto r = harmonic::closed_form_coefficients(J, pi, grid, opt);
  double norm_err = 0.0, mean_err = 0.0, peak = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double norm = 0.0, mean = 0.0;
    for (std::size_t n = 0; n < r.level_amplitudes[k].size(); ++n) {
      const double p = std::norm(r.level_amplitudes[k][n]);
      norm += p;
      mean += double(n) * p;
    }
    norm_err = std::max(norm_err, std::abs(norm - 1.0));
    mean_err = std::max(mean_err, std::abs(mean - r.trace.excitation[k]));
    peak = std::max(peak, r.trace.excitation[k]);
  }
  o.check(norm_err <= 1e-10, "max |sum |c_n|^2 - 1| = %.3g", norm_err);
  o.check(mean_err <= 1e-8, "max |sum n |c_n|^2 - |S|^2| = %.3g (peak |S|^2 %.4g, %zu levels)", mean_err,
          peak, r.max_level + 1);
  return o;
}

Outcome perturbative_order() {
  Outcome o;
  nlevel::QuantumSystemSpec sys;
  sys.energies = {0.0, 0.9, 2.3};
  sys.coupling = Eigen::MatrixXd(3, 3);
  sys.coupling << 0.1, 0.6, 0.2, 0.6, -0.3, 0.8, 0.2, 0.8, 0.05;
  const signal::SincExpansion J(1.0, {-1.0, 0.5, 2.0}, {0.7, -0.4, 0.25});
  const auto grid = TimeGrid::uniform(-30.0, 30.0, 1.0);
  std::vector<double> err;
  for (double delta : {0.08, 0.04, 0.02, 0.01}) {
    sys.delta = delta;
    const auto exact = nlevel::integrate_exact(sys, J, 0, grid, 1e-12);
    const auto c = nlevel::perturbative_amplitude(sys, J, 0, 1, grid);
    double e = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) e = std::max(e, std::abs(exact.coefficients[k](1) - c[k]));
    err.push_back(e);
  }
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double order = std::log2(err[i] / err[i + 1]);
    o.check(order >= 1.9, "order %.3f", order);
  }
  return o;
}

Outcome anharmonic_spectrum() {
  Outcome o;
  const double omega = 1.0;
  const auto harm = anharmonic::diagonalize({omega, 0.0, 16});
  o.check((harm.gaps.array() - omega).abs().maxCoeff() <= 1e-10, "lambda=0 max |gap - omega| = %.3g",
          (harm.gaps.array() - omega).abs().maxCoeff());

  double worst_ratio = 0.0, worst_rel = 0.0;
  for (std::size_t n = 0; n < 6; ++n) {
    const double lambda = 1e-3;
    double r[2];
    for (int h = 0; h < 2; ++h) {
      const double l = lambda / (1 << h);
      const auto s = anharmonic::diagonalize({omega, l, 32}, false);
      r[h] = s.eigenvalues(long(n)) - (n + 0.5) * omega - anharmonic::first_order_shift(n, omega, l);
    }
    worst_ratio = std::max(worst_ratio, std::abs(r[0] / r[1] - 4.0));
    worst_rel = std::max(worst_rel, std::abs(r[0]) / anharmonic::first_order_shift(n, omega, lambda));
  }
  o.check(worst_ratio <= 0.2, "lambda-halving residual ratio within %.3g of 4 (n <= 5)", worst_ratio);
  o.check(worst_rel <= 0.05, "lambda=1e-3 residual / shift <= %.3g", worst_rel);

  const auto strong = anharmonic::diagonalize({omega, 1.0, 16});
  bool increasing = true;
  for (int n = 1; n < 7; ++n) increasing = increasing && strong.gaps(n) > strong.gaps(n - 1);
  o.check(increasing, "lambda=1 N=16 gaps E1-E0..E7-E6 = %.3f .. %.3f strictly increasing", strong.gaps(0),
          strong.gaps(6));
  return o;
}

Outcome fractional_resonance() {
  Outcome o;
  const double omega = 1.0, band = 0.6;
  const signal::SincExpansion J(band, {0.0}, {1.0});
  const double t_late = 1e5;
  const auto r = anharmonic::classical_perturbative({omega, 1.0, 8}, J,
                                                    TimeGrid(std::vector<double>{t_late}));

  // Independent integration of q0'' + w^2 q0 = J, q1'' + w^2 q1 = q0^3.
  std::vector<double> y(4, 0.0);
  double t = -t_late;
  auto rhs = [&](double s, const std::vector<double>& v, std::vector<double>& d) {
    d[0] = v[1];
    d[1] = single_sinc(band, s) - omega * omega * v[0];
    d[2] = v[3];
    d[3] = v[0] * v[0] * v[0] - omega * omega * v[2];
  };
  rk4(rhs, t, y, t_late, 0.05);
  const double q1_late = std::hypot(y[2], y[3] / omega);

  // q0 falls off like the sinc tail, 1/t; sample a quarter period apart for the envelope
  const double t_far = 1e8;
  const double q0_far = std::hypot(anharmonic::q0_at(J, omega, t_far),
                                   anharmonic::q0_at(J, omega, t_far + pi / (2 * omega)));
  o.check(r.q0_asymptotic_amplitude <= 1e-6 && q0_far <= 1e-6, "q0(inf) amplitude %.3g (%.3g at t = 1e8)",
          r.q0_asymptotic_amplitude, q0_far);
  const double rel = std::abs(q1_late - r.q1_asymptotic_amplitude) / r.q1_asymptotic_amplitude;
  o.check(rel <= 0.01, "q1 late amplitude %.6g vs sqrt(2pi)|FT[q0^3](w)|/w = %.6g (rel %.2g)", q1_late,
          r.q1_asymptotic_amplitude, rel);
  const double at_omega = std::abs(anharmonic::q0_cubed_spectrum(J, omega, omega).value);
  double outside = 0.0;
  for (double nu : {3 * band + 0.2, 4 * band, 6 * band})
    outside = std::max(outside, std::abs(anharmonic::q0_cubed_spectrum(J, omega, nu).value));
  o.check(outside <= 1e-6 * at_omega, "|FT[q0^3]| beyond 3*Omega+0.2 is %.3g vs %.3g at omega", outside,
          at_omega);
  return o;
}

Outcome dispersion() {
  Outcome o;
  double vieta = 0.0;
  for (int i = 1; i <= 10; ++i)
    for (int j = 1; j <= 10; ++j) {
      const double scale = 0.5 * j, k = scale / 2 * (i / 10.5);
      const auto r = dispersive::solve_dispersion(k, scale);
      vieta = std::max({vieta, std::abs(r.omega1 * r.omega2 / (k * scale) - 1.0),
                        std::abs((r.omega1 * r.omega1 + r.omega2 * r.omega2) / (scale * scale) - 1.0),
                        dispersive::relative_residual(r, r.omega1), dispersive::relative_residual(r, r.omega2)});
    }
  o.check(vieta <= 1e-12, "Vieta/residual max %.3g over 100 (k, Lambda)", vieta);

  double limit = 0.0;
  for (double k : {0.1, 1.0, 5.0}) {
    const double scale = 20 * k, bound = 2 * k * k / (scale * scale);
    const auto r = dispersive::solve_dispersion(k, scale);
    limit = std::max({limit, std::abs(r.omega1 / scale - 1.0) / bound, std::abs(r.omega2 / k - 1.0) / bound});
  }
  o.check(limit <= 1.0, "Lambda=20k deviation / (2k^2/Lambda^2) = %.3f", limit);

  const auto roots = dispersive::solve_dispersion(1.0, 10.0);
  const signal::SincExpansion J(0.6, {-1.0, 0.0, 1.5}, {0.4, 1.0, -0.3});
  const double period = 2 * pi / roots.omega2, late = 1e8;
  std::vector<double> times;
  for (double s = -30.0; s <= 60.0; s += 0.25) times.push_back(s);
  const std::size_t early = times.size();
  for (double s = late; s <= late + 10 * period; s += 0.1) times.push_back(s);
  const auto green = dispersive::driven_response_green(roots, J, TimeGrid(times), {1e-12});
  double peak = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (k < early)
      peak = std::max(peak, std::abs(green.q[k]));
    else
      tail = std::max(tail, std::abs(green.q[k]));
  o.check(tail <= 1e-6 * peak, "last 10 periods max %.3g vs peak %.3g", tail, peak);

  const std::vector<double> head(times.begin(), times.begin() + long(early));
  const auto band_path = dispersive::driven_response(roots, J, TimeGrid(head));
  double diff = 0.0;
  for (std::size_t k = 0; k < early; ++k) diff = std::max(diff, std::abs(band_path.q[k] - green.q[k]));
  o.check(diff <= 1e-8, "band vs Green path max difference %.3g", diff);
  return o;
}

Outcome parametric_suite() {
  Outcome o;
  double worst_norm = 0.0;
  auto run = [&](const parametric::FrequencyProfile& p) {
    const auto [lo, hi] = p.static_bounds();
    const auto b = parametric::extract_bogoliubov(parametric::integrate_mode(p, lo, hi), p);
    worst_norm = std::max(worst_norm, b.normalization_residual);
    return b;
  };
  const auto flat = run(parametric::FrequencyProfile::constant(1.3));
  o.check(std::abs(flat.beta) < 1e-8, "constant |beta| = %.3g", std::abs(flat.beta));

  const double w1 = 1.0, w2 = 3.0;
  const double sudden = parametric::sudden_step_coefficients(w1, w2).second;
  double step_err = 0.0;
  for (double width : {1e-2, 1e-3, 1e-4}) {
    const auto b = run(parametric::FrequencyProfile::tanh_step(w1, w2, 0.0, width));
    step_err = std::abs(std::abs(b.beta) - sudden);
  }
  o.check(step_err <= 1e-3, "sudden step |beta| error %.3g at width 1e-4 (analytic %.6f)", step_err, sudden);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> freqs;
  const double step = 0.02;
  for (int i = 0; i <= 125; ++i) freqs.push_back(0.5 + step * i);
  const auto scan = parametric::resonance_scan(1.0, 0.05, 60.0, freqs);
  const double runtime = seconds_since(t0);
  std::size_t ok = 0;
  for (const auto& pt : scan.points)
    if (pt.ok) {
      ++ok;
      worst_norm = std::max(worst_norm, pt.normalization_residual);
    }
  const double arg = scan.argmax ? scan.points[*scan.argmax].mod_frequency : NAN;
  o.check(std::abs(arg - 2.0) <= step + 1e-12, "scan argmax %.3f (grid step %.2f, %zu/%zu points)", arg, step, ok,
          scan.points.size());
  o.check(worst_norm <= 1e-8, "max ||alpha|^2 - |beta|^2 - 1| = %.3g", worst_norm);
  o.check(runtime < 60.0, "scan runtime %.2f s", runtime);
  return o;
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "superosc-acceptance";
  fs::remove_all(root);
  std::size_t compared = 0, differing = 0;
  for (const std::string which : {"fig1", "fig2", "fig3"}) {
    std::ostringstream out, err;
    for (const char* run : {"a", "b"}) {
      const int code = cli::run({"--quiet", "--out", (root / run / which).string(), "figure", which}, out, err);
      if (code != cli::kExitOk) throw std::runtime_error(which + " failed: " + err.str());
    }
    for (const auto& entry : fs::directory_iterator(root / "a" / which)) {
      const auto ext = entry.path().extension();
      if (ext != ".csv" && ext != ".svg") continue;
      ++compared;
      if (slurp(entry.path()) != slurp(root / "b" / which / entry.path().filename())) ++differing;
    }
  }
  o.check(compared >= 6 && differing == 0, "%zu CSV/SVG files compared, %zu differ", compared, differing);
  return o;
}

}  // namespace

int main() {
  criterion(1, "signal figure (zero spacing, dynamic range, runtime)", signal_figure);
  criterion(2, "response figure (peak location, tails, asymptote, runtime)", response_figure);
  criterion(3, "closed form vs 12-level ladder integration", harmonic_cross_check);
  criterion(4, "Poisson normalisation and mean number", poisson_normalisation);
  criterion(5, "perturbative order under coupling halving", perturbative_order);
  criterion(6, "anharmonic spectrum", anharmonic_spectrum);
  criterion(7, "fractional resonance", fractional_resonance);
  criterion(8, "dispersion roots and driven decay", dispersion);
  criterion(9, "parametric suite", parametric_suite);
  criterion(10, "figure determinism", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
