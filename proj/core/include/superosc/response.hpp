#pragma once

#include <complex>
#include <vector>

#include "superosc/grid.hpp"
#include "superosc/quadrature.hpp"
#include "superosc/signal.hpp"

namespace superosc::response {

using cplx = std::complex<double>;

enum class LowerLimit {
  MinusInfinity,  // tail before the first panel added in closed form
  GridStart,      // integral starts at the first grid time
};

struct QuadratureSettings {
  double tol_per_unit = 1e-9;
  int order = 10;
  int max_depth = 30;
  // Grid steps that would need more panels than this are bridged with the
  // closed-form sinc primitive instead of panel quadrature.
  double bridge_panels = 2e5;
};

// Value of integral_{lower}^{t_k} J(s) exp(i omega s) ds at each grid time.
struct RunningIntegral {
  double omega = 0.0;
  double t_start = 0.0;  // where panel quadrature begins
  std::vector<double> times;
  std::vector<cplx> values;
  double quadrature_error = 0.0;  // accumulated panel error estimate
  double tail_error_bound = 0.0;  // roundoff bound on the closed-form pieces
  std::size_t bridged_steps = 0;
};

struct ResponseTrace {
  double probe_frequency = 0.0;
  double t_start = 0.0;
  std::vector<double> times;
  std::vector<cplx> amplitudes;   // S_omega(t)
  std::vector<double> excitation; // |S_omega(t)|^2
  double quadrature_error = 0.0;
  double tail_error_bound = 0.0;
};

// Panel layout used for J(s) exp(i omega s): width <= min(pi/|omega|, pi/Omega) / 8.
quad::PanelOptions panel_options(const signal::SincExpansion& J, double omega,
                                 const QuadratureSettings& settings);

// integral_{a}^{b} J(s) exp(i omega s) ds by adaptive panel quadrature.
quad::Estimate fourier_increment(const signal::SincExpansion& J, double omega, double a, double b,
                                 const quad::PanelOptions& options);

// integral_{-inf}^{t} J(s) exp(i omega s) ds from the closed-form sinc primitive.
cplx fourier_primitive(const signal::SincExpansion& J, double omega, double t);

RunningIntegral running_fourier_integral(const signal::SincExpansion& J, double omega,
                                         const TimeGrid& grid, LowerLimit lower,
                                         const QuadratureSettings& settings = {});

// S_omega(t) = (-i / sqrt(2 omega)) integral_{-inf}^{t} J(s) exp(i omega s) ds.
ResponseTrace partial_fourier(const signal::SincExpansion& J, double omega, const TimeGrid& grid,
                              const QuadratureSettings& settings = {},
                              LowerLimit lower = LowerLimit::MinusInfinity);

inline ResponseTrace partial_fourier(const signal::SincExpansion& J, double omega,
                                     const TimeGrid& grid, double quad_tol) {
  QuadratureSettings s;
  s.tol_per_unit = quad_tol;
  return partial_fourier(J, omega, grid, s);
}

// lim_{t -> inf} S_omega(t) = (-i / sqrt(2 omega)) sqrt(2 pi) Jtilde(-omega).
cplx asymptotic_value(const signal::SincExpansion& J, double omega);

}  // namespace superosc::response
