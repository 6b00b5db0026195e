#pragma once

#include <array>
#include <vector>

#include "superosc/grid.hpp"
#include "superosc/response.hpp"
#include "superosc/signal.hpp"

namespace superosc::dispersive {

enum class RootBranch { Real, Degenerate, Complex };

// Roots of omega^4 / Lambda^2 - omega^2 + k^2 = 0, omega1 >= omega2 > 0.
struct DispersionRoots {
  double k = 0.0;
  double scale = 0.0;  // Lambda
  RootBranch branch = RootBranch::Real;
  double omega1 = 0.0;
  double omega2 = 0.0;
  // d omega / d k and omega / k at omega1, omega2. Infinite group velocity at
  // the degenerate point.
  std::array<double, 2> group_velocity{};
  std::array<double, 2> phase_velocity{};

  bool real() const { return branch != RootBranch::Complex; }
};

DispersionRoots solve_dispersion(double k, double scale);

// omega^4 / Lambda^2 - omega^2 + k^2 divided by its largest term.
double relative_residual(const DispersionRoots& roots, double omega);

// G(nu) = c [1 / (nu^2 - omega1^2) - 1 / (nu^2 - omega2^2)], c = 1 / (omega1^2 - omega2^2).
struct PartialFractions {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double c = 0.0;

  double operator()(double nu) const;
  // 1 / ((nu^2 - omega1^2)(nu^2 - omega2^2)) evaluated directly.
  double direct(double nu) const;
};

// DegenerateRoots when |omega1 - omega2| <= rel_tol * omega1.
PartialFractions greens_partial_fractions(const DispersionRoots& roots, double rel_tol = 1e-6);

struct DispersiveTrace {
  std::vector<double> times;
  std::vector<double> q;
  double quadrature_error = 0.0;
};

// q(t) = integral_{-Omega}^{Omega} dnu / sqrt(2 pi) Jtilde(nu) exp(i nu t) / ((nu^2 - w1^2)(nu^2 - w2^2)),
// by quadrature over the band at each grid time.
DispersiveTrace driven_response(const DispersionRoots& roots, const signal::SincExpansion& J,
                                const TimeGrid& grid, double quad_tol = 1e-12);

// Same response as c (x2 - x1), with x_j the retarded response of a unit
// oscillator at omega_j.
DispersiveTrace driven_response_green(const DispersionRoots& roots,
                                      const signal::SincExpansion& J, const TimeGrid& grid,
                                      const response::QuadratureSettings& settings = {});

}  // namespace superosc::dispersive
