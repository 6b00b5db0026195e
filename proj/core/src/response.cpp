#include "superosc/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "superosc/error.hpp"

namespace superosc::response {

quad::PanelOptions panel_options(const signal::SincExpansion& J, double omega,
                                 const QuadratureSettings& settings) {
  require(settings.tol_per_unit > 0.0, "quadrature tolerance must be positive");
  double width = std::numbers::pi / J.bandlimit();
  if (omega != 0.0) width = std::min(width, std::numbers::pi / std::abs(omega));
  quad::PanelOptions opt;
  opt.max_panel = width / 8.0;
  opt.tol_per_unit = settings.tol_per_unit;
  opt.order = settings.order;
  opt.max_depth = settings.max_depth;
  return opt;
}

quad::Estimate fourier_increment(const signal::SincExpansion& J, double omega, double a, double b,
                                 const quad::PanelOptions& options) {
  if (J.empty()) return {};
  auto integrand = [&](double s) { return J(s) * std::polar(1.0, omega * s); };
  return quad::integrate(integrand, a, b, options);
}

cplx fourier_primitive(const signal::SincExpansion& J, double omega, double t) {
  const auto centers = J.centers();
  const auto weights = J.weights();
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < centers.size(); ++i)
    sum += weights[i] * std::polar(1.0, omega * centers[i]) *
           quad::sinc_fourier_primitive(J.bandlimit(), omega, t - centers[i]);
  return sum;
}

RunningIntegral running_fourier_integral(const signal::SincExpansion& J, double omega,
                                         const TimeGrid& grid, LowerLimit lower,
                                         const QuadratureSettings& settings) {
  require(std::isfinite(omega), "probe frequency must be finite");
  RunningIntegral out;
  out.omega = omega;
  out.times.assign(grid.times().begin(), grid.times().end());
  out.values.assign(grid.size(), cplx{});
  if (grid.empty()) return out;

  const quad::PanelOptions opt = panel_options(J, omega, settings);
  const double eps = std::numeric_limits<double>::epsilon();
  cplx acc{0.0, 0.0};
  double t = grid.front();

  if (lower == LowerLimit::MinusInfinity && !J.empty()) {
    // Start one sidelobe before the leftmost center so every term of the
    // closed-form tail sits on its monotone branch.
    t = std::min(grid.front(), J.support_min() - std::numbers::pi / J.bandlimit());
    acc = fourier_primitive(J, omega, t);
    out.tail_error_bound += 8.0 * eps * J.weight_l1();
  }
  out.t_start = t;

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double target = grid[k];
    if (target > t) {
      const double panels = (target - t) / opt.max_panel;
      if (panels > settings.bridge_panels && !J.empty()) {
        acc += fourier_primitive(J, omega, target) - fourier_primitive(J, omega, t);
        out.tail_error_bound += 16.0 * eps * J.weight_l1();
        ++out.bridged_steps;
      } else {
        const quad::Estimate inc = fourier_increment(J, omega, t, target, opt);
        acc += inc.value;
        out.quadrature_error += inc.error;
      }
      t = target;
    }
    out.values[k] = acc;
  }
  return out;
}

ResponseTrace partial_fourier(const signal::SincExpansion& J, double omega, const TimeGrid& grid,
                              const QuadratureSettings& settings, LowerLimit lower) {
  require(omega > 0.0 && std::isfinite(omega), "probe frequency must be positive");
  const RunningIntegral raw = running_fourier_integral(J, omega, grid, lower, settings);
  const cplx prefactor = cplx(0.0, -1.0) / std::sqrt(2.0 * omega);
  ResponseTrace out;
  out.probe_frequency = omega;
  out.t_start = raw.t_start;
  out.times = raw.times;
  out.amplitudes.resize(raw.values.size());
  out.excitation.resize(raw.values.size());
  for (std::size_t k = 0; k < raw.values.size(); ++k) {
    out.amplitudes[k] = prefactor * raw.values[k];
    out.excitation[k] = std::norm(out.amplitudes[k]);
  }
  const double scale = std::abs(prefactor);
  out.quadrature_error = scale * raw.quadrature_error;
  out.tail_error_bound = scale * raw.tail_error_bound;
  return out;
}

cplx asymptotic_value(const signal::SincExpansion& J, double omega) {
  require(omega > 0.0 && std::isfinite(omega), "probe frequency must be positive");
  if (omega > J.bandlimit()) return {0.0, 0.0};
  return cplx(0.0, -1.0) / std::sqrt(2.0 * omega) * std::sqrt(2.0 * std::numbers::pi) *
         signal::evaluate_spectrum(J, -omega);
}

}  // namespace superosc::response
