#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "superosc/grid.hpp"
#include "superosc/ode.hpp"
#include "superosc/response.hpp"
#include "superosc/signal.hpp"

namespace superosc::nlevel {

using cplx = std::complex<double>;

// H = H0 + delta * q * J(t), with H0 = diag(energies) and q_mn = coupling(m, n).
struct QuantumSystemSpec {
  std::vector<double> energies;
  Eigen::MatrixXd coupling;
  double delta = 0.0;

  std::size_t levels() const { return energies.size(); }
  void validate() const;
};

// Interaction-picture amplitudes c_m(t); |psi(t)> = exp(-i H0 t) sum_m c_m(t) |m>.
struct AmplitudeTrace {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> coefficients;
  double norm_drift = 0.0;
  ode::Stats stats;
};

// First N levels of the oscillator with frequency omega: E_n = (n + 1/2) omega,
// q_{n,n+1} = sqrt((n + 1) / (2 omega)).
QuantumSystemSpec harmonic_ladder(std::size_t levels, double omega, double delta);

// c_m(t) = delta_mn - i delta q_mn integral_{t_start}^{t} J(s) exp(i (E_m - E_n) s) ds,
// t_start being the first grid time.
std::vector<cplx> perturbative_amplitude(const QuantumSystemSpec& sys,
                                         const signal::SincExpansion& J, std::size_t initial,
                                         std::size_t final_level, const TimeGrid& grid,
                                         const response::QuadratureSettings& settings = {});

// Solves i c_m' = sum_s delta J(t) q_ms exp(i (E_m - E_s) t) c_s from
// c(t_start) = e_initial with Dormand-Prince 5(4) at rtol = atol = ode_tol.
AmplitudeTrace integrate_exact(const QuantumSystemSpec& sys, const signal::SincExpansion& J,
                               std::size_t initial, const TimeGrid& grid, double ode_tol = 1e-10);

}  // namespace superosc::nlevel
