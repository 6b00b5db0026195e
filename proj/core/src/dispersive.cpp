#include "superosc/dispersive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "superosc/error.hpp"
#include "superosc/quadrature.hpp"

namespace superosc::dispersive {

namespace {

using std::numbers::pi;

void check_band(const DispersionRoots& roots, const signal::SincExpansion& J) {
  if (!roots.real()) fail(ErrorKind::ValidationFailed, "dispersion roots are complex (k > Lambda/2)");
  if (J.bandlimit() >= roots.omega2)
    fail(ErrorKind::ResonanceInBand,
         "bandlimit " + std::to_string(J.bandlimit()) + " reaches the root " +
             std::to_string(roots.omega2));
}

}  // namespace

DispersionRoots solve_dispersion(double k, double scale) {
  require(std::isfinite(k) && k > 0.0, "k must be finite and positive");
  require(std::isfinite(scale) && scale > 0.0, "Lambda must be finite and positive");
  DispersionRoots r;
  r.k = k;
  r.scale = scale;
  const double ratio = 2.0 * k / scale;
  const double disc = (1.0 - ratio) * (1.0 + ratio);
  if (disc < 0.0) {
    r.branch = RootBranch::Complex;
    r.omega1 = r.omega2 = std::numeric_limits<double>::quiet_NaN();
    r.group_velocity.fill(std::numeric_limits<double>::quiet_NaN());
    r.phase_velocity.fill(std::numeric_limits<double>::quiet_NaN());
    return r;
  }
  r.branch = disc == 0.0 ? RootBranch::Degenerate : RootBranch::Real;
  r.omega1 = scale / std::sqrt(2.0) * std::sqrt(1.0 + std::sqrt(disc));
  // Product of the roots is k Lambda; avoids cancellation in 1 - sqrt(disc).
  r.omega2 = k * scale / r.omega1;
  const std::array<double, 2> w{r.omega1, r.omega2};
  for (int i = 0; i < 2; ++i) {
    const double denom = w[i] - 2.0 * w[i] * w[i] * w[i] / (scale * scale);
    r.group_velocity[i] =
        denom == 0.0 ? std::numeric_limits<double>::infinity() : k / denom;
    r.phase_velocity[i] = w[i] / k;
  }
  return r;
}

double relative_residual(const DispersionRoots& roots, double omega) {
  const double a = omega * omega * omega * omega / (roots.scale * roots.scale);
  const double b = omega * omega;
  const double c = roots.k * roots.k;
  return std::abs(a - b + c) / std::max({a, b, c});
}

double PartialFractions::operator()(double nu) const {
  const double n2 = nu * nu;
  return c * (1.0 / (n2 - omega1 * omega1) - 1.0 / (n2 - omega2 * omega2));
}

double PartialFractions::direct(double nu) const {
  const double n2 = nu * nu;
  return 1.0 / ((n2 - omega1 * omega1) * (n2 - omega2 * omega2));
}

PartialFractions greens_partial_fractions(const DispersionRoots& roots, double rel_tol) {
  if (!roots.real()) fail(ErrorKind::ValidationFailed, "dispersion roots are complex (k > Lambda/2)");
  if (std::abs(roots.omega1 - roots.omega2) <= rel_tol * roots.omega1)
    fail(ErrorKind::DegenerateRoots, "roots coincide; partial fractions undefined");
  PartialFractions pf;
  pf.omega1 = roots.omega1;
  pf.omega2 = roots.omega2;
  pf.c = 1.0 / ((roots.omega1 - roots.omega2) * (roots.omega1 + roots.omega2));
  return pf;
}

DispersiveTrace driven_response(const DispersionRoots& roots, const signal::SincExpansion& J,
                                const TimeGrid& grid, double quad_tol) {
  DispersiveTrace out;
  out.times.assign(grid.times().begin(), grid.times().end());
  out.q.assign(grid.size(), 0.0);
  if (J.empty()) return out;
  check_band(roots, J);
  const double band = J.bandlimit();
  const double w1 = roots.omega1 * roots.omega1;
  const double w2 = roots.omega2 * roots.omega2;
  const auto centers = J.centers();
  const auto weights = J.weights();

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    double reach = 0.0;
    for (double c : centers) reach = std::max(reach, std::abs(t - c));
    // Integrand is even in nu: (1/pi) sum_i b_i integral_0^Omega cos(nu (t - t_i)) / D(nu).
    auto f = [&](double nu) {
      const double n2 = nu * nu;
      double acc = 0.0;
      for (std::size_t i = 0; i < centers.size(); ++i)
        acc += weights[i] * std::cos(nu * (t - centers[i]));
      return quad::cplx(acc / ((n2 - w1) * (n2 - w2)), 0.0);
    };
    quad::PanelOptions opt;
    opt.tol_per_unit = quad_tol;
    opt.max_panel = std::min(band, reach > 0.0 ? pi / (2.0 * reach) : band);
    const quad::Estimate e = quad::integrate(f, 0.0, band, opt);
    out.q[k] = e.value.real() / pi;
    out.quadrature_error += e.error / pi;
  }
  return out;
}

DispersiveTrace driven_response_green(const DispersionRoots& roots,
                                      const signal::SincExpansion& J, const TimeGrid& grid,
                                      const response::QuadratureSettings& settings) {
  DispersiveTrace out;
  out.times.assign(grid.times().begin(), grid.times().end());
  out.q.assign(grid.size(), 0.0);
  if (J.empty()) return out;
  check_band(roots, J);
  const PartialFractions pf = greens_partial_fractions(roots);

  std::array<std::vector<double>, 2> x;
  const std::array<double, 2> w{roots.omega1, roots.omega2};
  for (int j = 0; j < 2; ++j) {
    const response::RunningIntegral p = response::running_fourier_integral(
        J, w[j], grid, response::LowerLimit::MinusInfinity, settings);
    out.quadrature_error += std::abs(pf.c) * p.quadrature_error / w[j];
    x[j].resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
      x[j][k] = std::imag(std::polar(1.0, w[j] * grid[k]) * std::conj(p.values[k])) / w[j];
  }
  for (std::size_t k = 0; k < grid.size(); ++k) out.q[k] = pf.c * (x[1][k] - x[0][k]);
  return out;
}

}  // namespace superosc::dispersive
