#include "superosc/harmonic.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "superosc/error.hpp"

namespace superosc::harmonic {

namespace {

constexpr int kInnerOrder = 20;

// Phi increments over each grid step, anchored on the S values of `trace`.
std::vector<cplx> phase_integral(const signal::SincExpansion& J, double omega,
                                 const response::ResponseTrace& trace,
                                 const response::QuadratureSettings& settings) {
  const std::size_t n = trace.times.size();
  std::vector<cplx> phi(n, cplx{});
  if (n == 0) return phi;
  const cplx pre = cplx(0.0, -1.0) / std::sqrt(2.0 * omega);
  phi[0] = -0.5 * trace.excitation[0];
  if (J.empty()) return phi;

  const quad::PanelOptions opt = response::panel_options(J, omega, settings);
  auto forward = [&](double s) { return J(s) * std::polar(1.0, omega * s); };

  for (std::size_t k = 1; k < n; ++k) {
    const double a = trace.times[k - 1];
    const double b = trace.times[k];
    const double panels = std::ceil((b - a) / opt.max_panel - 1e-12);
    if (panels > settings.bridge_panels)
      fail(ErrorKind::TolUnachievable,
           "grid step too long for the phase integral; refine the grid");
    const auto count = static_cast<long long>(std::max(1.0, panels));
    const double h = (b - a) / static_cast<double>(count);
    cplx s_anchor = trace.amplitudes[k - 1];
    cplx acc = phi[k - 1];
    for (long long p = 0; p < count; ++p) {
      const double lo = a + static_cast<double>(p) * h;
      const double hi = (p + 1 == count) ? b : lo + h;
      auto integrand = [&](double s) {
        const cplx s_val = s_anchor + pre * quad::fixed(forward, lo, s, kInnerOrder);
        return J(s) * std::polar(1.0, -omega * s) * s_val;
      };
      acc += pre * quad::integrate(integrand, lo, hi, opt).value;
      s_anchor += pre * quad::fixed(forward, lo, hi, kInnerOrder);
    }
    phi[k] = acc;
  }
  return phi;
}

}  // namespace

double poisson_upper_tail(std::size_t n, double mean) {
  if (mean <= 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(n) + 1.0, mean);
}

std::size_t level_cutoff(double mean, double target, std::size_t cap) {
  if (mean <= 0.0) return 0;
  // Start near the bulk and walk upward.
  std::size_t n = static_cast<std::size_t>(std::max(0.0, std::floor(mean)));
  while (n < cap && poisson_upper_tail(n, mean) >= target) ++n;
  return std::min(n, cap);
}

std::vector<double> number_expectation(const signal::SincExpansion& J, double omega,
                                       const TimeGrid& grid, const HarmonicOptions& options) {
  return response::partial_fourier(J, omega, grid, options.quadrature, options.lower).excitation;
}

OverlapTraces ground_state_overlap(const signal::SincExpansion& J, double omega,
                                   const TimeGrid& grid, const HarmonicOptions& options) {
  HarmonicOptions opt = options;
  opt.max_level = 0;
  return closed_form_coefficients(J, omega, grid, opt).overlap;
}

HarmonicDriveResult closed_form_coefficients(const signal::SincExpansion& J, double omega,
                                             const TimeGrid& grid,
                                             const HarmonicOptions& options) {
  HarmonicDriveResult out;
  out.frequency = omega;
  out.trace = response::partial_fourier(J, omega, grid, options.quadrature, options.lower);
  out.phase_integral = phase_integral(J, omega, out.trace, options.quadrature);

  const std::size_t n = out.trace.times.size();
  double peak = 0.0;
  for (double x : out.trace.excitation) peak = std::max(peak, x);
  out.max_level = options.max_level.value_or(
      level_cutoff(peak, options.poisson_tail_target, options.max_auto_level));

  if (options.lower == response::LowerLimit::MinusInfinity && !J.empty()) {
    const double gap = std::max(0.0, J.support_min() - out.trace.t_start);
    const double env = J.tail_envelope(out.trace.t_start);
    out.phase_tail_estimate = env * env * std::max(gap, 1.0) / (2.0 * omega * omega * omega);
  }

  out.overlap.times = out.trace.times;
  out.overlap.instantaneous.resize(n);
  out.overlap.schrodinger.resize(n);
  out.overlap.asymptotic_form.resize(n);
  out.level_amplitudes.assign(n, std::vector<cplx>(out.max_level + 1));
  out.poisson_tail.resize(n);

  for (std::size_t k = 0; k < n; ++k) {
    const double x = out.trace.excitation[k];
    const cplx s = out.trace.amplitudes[k];
    const cplx phi = out.phase_integral[k];
    out.overlap.instantaneous[k] = std::exp(-0.5 * x);
    out.overlap.schrodinger[k] = std::exp(phi);
    out.overlap.asymptotic_form[k] = std::exp(-x);
    out.poisson_tail[k] = poisson_upper_tail(out.max_level, x);

    auto& c = out.level_amplitudes[k];
    c[0] = std::exp(phi);
    if (s == cplx{}) continue;
    // Log domain keeps large |S| from underflowing exp(Phi).
    const cplx log_s = std::log(s);
    for (std::size_t level = 1; level <= out.max_level; ++level) {
      const double nd = static_cast<double>(level);
      c[level] = std::exp(phi + nd * log_s - 0.5 * std::lgamma(nd + 1.0));
    }
  }
  return out;
}

}  // namespace superosc::harmonic
