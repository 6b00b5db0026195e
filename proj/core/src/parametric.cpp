#include "superosc/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "superosc/error.hpp"

namespace superosc::parametric {

namespace {

using std::numbers::pi;

double gauss(double x) { return std::exp(-0.5 * x * x); }

cplx plane_wave(double w, double t) { return std::polar(1.0 / std::sqrt(2.0 * w), -w * t); }

cplx wronskian(cplx q, cplx dq) { return q * std::conj(dq) - std::conj(q) * dq; }

// Upper bound on |omega'| at distance x widths from the center (x >= 0),
// decreasing once x exceeds a few widths.
double derivative_bound(const FrequencyProfile& p, double x) {
  switch (p.kind) {
    case ProfileKind::Constant:
      return 0.0;
    case ProfileKind::TanhStep: {
      const double s = 1.0 / std::cosh(x);
      return std::abs(p.omega_out - p.omega_in) / (2.0 * p.width) * s * s;
    }
    case ProfileKind::GaussianBump:
      return std::abs(p.amplitude) * x / p.width * gauss(x);
    case ProfileKind::Modulated:
      return p.omega0 * std::abs(p.depth) * (std::abs(p.mod_frequency) + x / p.width) * gauss(x);
  }
  return 0.0;
}

}  // namespace

FrequencyProfile FrequencyProfile::constant(double omega) {
  FrequencyProfile p;
  p.kind = ProfileKind::Constant;
  p.omega0 = p.omega_in = p.omega_out = omega;
  return p;
}

FrequencyProfile FrequencyProfile::tanh_step(double omega_in, double omega_out, double center,
                                             double width) {
  FrequencyProfile p;
  p.kind = ProfileKind::TanhStep;
  p.omega_in = omega_in;
  p.omega_out = omega_out;
  p.omega0 = omega_in;
  p.center = center;
  p.width = width;
  return p;
}

FrequencyProfile FrequencyProfile::gaussian_bump(double omega0, double amplitude, double center,
                                                 double width) {
  FrequencyProfile p;
  p.kind = ProfileKind::GaussianBump;
  p.omega0 = p.omega_in = p.omega_out = omega0;
  p.amplitude = amplitude;
  p.center = center;
  p.width = width;
  return p;
}

FrequencyProfile FrequencyProfile::modulated(double omega0, double depth, double mod_frequency,
                                             double envelope_width, double center) {
  FrequencyProfile p;
  p.kind = ProfileKind::Modulated;
  p.omega0 = p.omega_in = p.omega_out = omega0;
  p.depth = depth;
  p.mod_frequency = mod_frequency;
  p.center = center;
  p.width = envelope_width;
  return p;
}

void FrequencyProfile::validate() const {
  for (double v : {omega0, omega_in, omega_out, amplitude, depth, mod_frequency, center, width})
    require(std::isfinite(v), "profile parameters must be finite");
  require(width > 0.0, "profile width must be positive");
  require(min_frequency() > 0.0, "profile frequency must stay positive");
}

double FrequencyProfile::omega(double t) const {
  const double x = (t - center) / width;
  switch (kind) {
    case ProfileKind::Constant:
      return omega0;
    case ProfileKind::TanhStep:
      return omega_in + (omega_out - omega_in) * 0.5 * (1.0 + std::tanh(x));
    case ProfileKind::GaussianBump:
      return omega0 + amplitude * gauss(x);
    case ProfileKind::Modulated:
      return omega0 * (1.0 + depth * std::cos(mod_frequency * (t - center)) * gauss(x));
  }
  return omega0;
}

double FrequencyProfile::omega_dot(double t) const {
  const double x = (t - center) / width;
  switch (kind) {
    case ProfileKind::Constant:
      return 0.0;
    case ProfileKind::TanhStep: {
      const double s = 1.0 / std::cosh(x);
      return (omega_out - omega_in) * 0.5 * s * s / width;
    }
    case ProfileKind::GaussianBump:
      return -amplitude * x / width * gauss(x);
    case ProfileKind::Modulated: {
      const double phase = mod_frequency * (t - center);
      return omega0 * depth * gauss(x) *
             (-mod_frequency * std::sin(phase) - x / width * std::cos(phase));
    }
  }
  return 0.0;
}

double FrequencyProfile::initial_frequency() const {
  return kind == ProfileKind::TanhStep ? omega_in : omega0;
}

double FrequencyProfile::final_frequency() const {
  return kind == ProfileKind::TanhStep ? omega_out : omega0;
}

double FrequencyProfile::min_frequency() const {
  switch (kind) {
    case ProfileKind::Constant:
      return omega0;
    case ProfileKind::TanhStep:
      return std::min(omega_in, omega_out);
    case ProfileKind::GaussianBump:
      return std::min(omega0, omega0 + amplitude);
    case ProfileKind::Modulated:
      return omega0 * (1.0 - std::abs(depth));
  }
  return omega0;
}

double FrequencyProfile::flatness(double t) const {
  const double w = omega(t);
  return std::abs(omega_dot(t)) / (w * w);
}

std::pair<double, double> FrequencyProfile::static_bounds(double threshold) const {
  if (kind == ProfileKind::Constant) return {center - width, center + width};  // static everywhere
  const double wmin = min_frequency();
  double x = 1.0;
  while (derivative_bound(*this, x) / (wmin * wmin) >= threshold && x < 1e6) x *= 1.25;
  return {center - x * width, center + x * width};
}

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Constant:
      return "constant";
    case ProfileKind::TanhStep:
      return "tanh_step";
    case ProfileKind::GaussianBump:
      return "gaussian_bump";
    case ProfileKind::Modulated:
      return "modulated";
  }
  return "constant";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "constant") return ProfileKind::Constant;
  if (name == "tanh_step") return ProfileKind::TanhStep;
  if (name == "gaussian_bump") return ProfileKind::GaussianBump;
  if (name == "modulated") return ProfileKind::Modulated;
  fail(ErrorKind::ValidationFailed, "unknown profile kind '" + name + "'");
}

namespace {

// Samples must be monotone, in either direction away from t_start.
ModeTrace run_mode(const FrequencyProfile& profile, double t_start, std::vector<double> times,
                   double ode_tol) {
  profile.validate();
  require(std::isfinite(ode_tol) && ode_tol > 0.0, "ode_tol must be positive");
  require(!times.empty(), "mode integration needs at least one sample time");
  ModeTrace out;
  out.start_flatness = profile.flatness(t_start);
  if (out.start_flatness >= kFlatnessThreshold)
    fail(ErrorKind::NotAsymptoticallyStatic,
         "omega(t) is not static at t_start = " + std::to_string(t_start) +
             " (|omega'/omega^2| = " + std::to_string(out.start_flatness) + ")");

  const double w = profile.omega(t_start);
  ode::ModeState y0{plane_wave(w, t_start), {}};
  y0.dq = cplx(0.0, -w) * y0.q;
  const cplx w0 = wronskian(y0.q, y0.dq);

  const std::size_t n = times.size();
  out.times = std::move(times);
  out.q.resize(n);
  out.dq.resize(n);
  ode::Options opt;
  opt.rtol = ode_tol;
  opt.atol = ode_tol;
  // At most one period of the fastest local oscillation per step.
  double wmax = std::max(profile.initial_frequency(), profile.final_frequency());
  if (profile.kind == ProfileKind::GaussianBump)
    wmax = std::max(wmax, profile.omega0 + profile.amplitude);
  if (profile.kind == ProfileKind::Modulated)
    wmax = profile.omega0 * (1.0 + std::abs(profile.depth));
  opt.max_step = 2.0 * pi / wmax;
  if (profile.kind != ProfileKind::Constant) opt.max_step = std::min(opt.max_step, profile.width);

  auto omega_sq = [&profile](double t) {
    const double v = profile.omega(t);
    return v * v;
  };
  out.stats = ode::gauss_mode(omega_sq, t_start, y0, out.times, opt,
                              [&](std::size_t k, double, const ode::ModeState& y) {
                                out.q[k] = y.q;
                                out.dq[k] = y.dq;
                                out.wronskian_drift = std::max(
                                    out.wronskian_drift, std::abs(wronskian(y.q, y.dq) - w0));
                              });
  return out;
}

}  // namespace

ModeTrace integrate_mode(const FrequencyProfile& profile, double t_start, const TimeGrid& grid,
                         double ode_tol) {
  return run_mode(profile, t_start, std::vector<double>(grid.times().begin(), grid.times().end()),
                  ode_tol);
}

ModeTrace integrate_mode(const FrequencyProfile& profile, double t_start, double t_end,
                         const ModeOptions& options) {
  require(std::isfinite(t_start) && std::isfinite(t_end) && t_start != t_end,
          "t_start and t_end must be finite and distinct");
  const std::size_t n = std::max<std::size_t>(2, options.samples);
  std::vector<double> times(n);
  for (std::size_t k = 0; k < n; ++k)
    times[k] = t_start + (t_end - t_start) * static_cast<double>(k) / static_cast<double>(n - 1);
  times.back() = t_end;
  return run_mode(profile, t_start, std::move(times), options.ode_tol);
}

BogoliubovPair extract_bogoliubov(const ModeTrace& trace, const FrequencyProfile& profile) {
  require(!trace.times.empty(), "empty mode trace");
  BogoliubovPair out;
  const double t = trace.times.back();
  out.flatness_residual = profile.flatness(t);
  if (out.flatness_residual >= kFlatnessThreshold)
    fail(ErrorKind::NotAsymptoticallyStatic,
         "omega(t) is not static at t_end = " + std::to_string(t) +
             " (|omega'/omega^2| = " + std::to_string(out.flatness_residual) + ")");
  const double w = profile.omega(t);
  const cplx u = plane_wave(w, t);
  const cplx q = trace.q.back();
  const cplx dq = trace.dq.back();
  const cplx i(0.0, 1.0);
  out.alpha = (q + i * dq / w) / (2.0 * u);
  out.beta = (q - i * dq / w) / (2.0 * std::conj(u));
  out.normalization_residual = std::abs(std::norm(out.alpha) - std::norm(out.beta) - 1.0);
  return out;
}

std::pair<double, double> sudden_step_coefficients(double omega1, double omega2) {
  const double d = 2.0 * std::sqrt(omega1 * omega2);
  return {(omega2 + omega1) / d, std::abs(omega2 - omega1) / d};
}

ScanResult resonance_scan(double omega0, double depth, double envelope_width,
                          const std::vector<double>& mod_frequencies,
                          const ScanOptions& options) {
  ScanResult out;
  out.points.reserve(mod_frequencies.size());
  for (double nu : mod_frequencies) {
    ScanPoint pt;
    pt.mod_frequency = nu;
    try {
      const FrequencyProfile p = FrequencyProfile::modulated(omega0, depth, nu, envelope_width);
      p.validate();
      auto [lo, hi] = p.static_bounds(0.1 * kFlatnessThreshold);
      const double half = options.half_span_widths * envelope_width;
      lo = std::min(lo, p.center - half);
      hi = std::max(hi, p.center + half);
      ModeOptions mo;
      mo.ode_tol = options.ode_tol;
      mo.samples = 2;
      const ModeTrace tr = integrate_mode(p, lo, hi, mo);
      const BogoliubovPair bp = extract_bogoliubov(tr, p);
      pt.beta_sq = bp.excitation();
      pt.normalization_residual = bp.normalization_residual;
      pt.ok = true;
    } catch (const Error& e) {
      pt.error = std::string(superosc::to_string(e.kind())) + ": " + e.what();
    }
    out.points.push_back(std::move(pt));
  }
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    const ScanPoint& pt = out.points[k];
    if (!pt.ok) continue;
    if (!out.argmax || pt.beta_sq > out.points[*out.argmax].beta_sq) out.argmax = k;
    if (std::abs(pt.mod_frequency - omega0) <= 0.25 * omega0 &&
        (!out.secondary || pt.beta_sq > out.points[*out.secondary].beta_sq))
      out.secondary = k;
  }
  return out;
}

double fit_growth_rate(const ModeTrace& trace, const FrequencyProfile& profile, double t0,
                       double t1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const double t = trace.times[k];
    if (t < std::min(t0, t1) || t > std::max(t0, t1)) continue;
    const double w = profile.omega(t);
    const double e = std::sqrt(std::norm(trace.dq[k]) + w * w * std::norm(trace.q[k]));
    const double y = std::log(e);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++n;
  }
  require(n >= 2, "growth-rate fit needs at least two samples in the window");
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace superosc::parametric
