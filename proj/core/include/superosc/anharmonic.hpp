#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "superosc/grid.hpp"
#include "superosc/nlevel.hpp"
#include "superosc/response.hpp"
#include "superosc/signal.hpp"

namespace superosc::anharmonic {

using cplx = std::complex<double>;

// H = p^2/2 + omega^2 q^2/2 + lambda q^4, truncated to the lowest N oscillator states.
struct AnharmonicSpec {
  double omega = 1.0;
  double lambda = 0.0;
  std::size_t truncation = 16;

  void validate() const;
};

struct SpectrumSummary {
  double omega = 1.0;
  double lambda = 0.0;
  Eigen::VectorXd eigenvalues;     // ascending
  Eigen::VectorXd gaps;            // E_n - E_{n-1}, n = 1..N-1
  Eigen::MatrixXd eigenvectors;    // columns are eigenstates in the oscillator basis
  Eigen::MatrixXd position_matrix; // <n|q|m> between eigenstates
  bool converged = false;          // lowest N/2 levels stable at size 2N
  double convergence_change = 0.0; // max change of those levels
};

// <n|q|m> = sqrt(max(n,m) / (2 omega)) for |n - m| = 1.
Eigen::MatrixXd ladder_position(std::size_t size, double omega);

// Quartic part from the fourth power of the position matrix at size N + 4.
Eigen::MatrixXd build_hamiltonian(const AnharmonicSpec& spec);

SpectrumSummary diagonalize(const AnharmonicSpec& spec, bool check_convergence = true);

// First-order shift 3 lambda (2n^2 + 2n + 1) / (4 omega^2).
double first_order_shift(std::size_t n, double omega, double lambda);

nlevel::QuantumSystemSpec to_quantum_system(const SpectrumSummary& summary, double delta);

struct ClassicalSettings {
  response::QuadratureSettings quadrature;
  // How far past the outermost sinc centers the q0^3 integrals extend.
  // Zero picks 400 pi / Omega.
  double horizon = 0.0;
};

struct ClassicalPerturbativeResult {
  double omega = 1.0;
  std::vector<double> times;
  std::vector<double> q0;
  std::vector<double> q1;
  // (1/sqrt(2 pi)) integral q0(s)^3 exp(-i omega s) ds
  cplx q0_cubed_spectrum_at_omega{};
  // sqrt(2 pi) |FT[q0^3](omega)| / omega
  double q1_asymptotic_amplitude = 0.0;
  // sqrt(2 pi) |Jtilde(omega)| / omega
  double q0_asymptotic_amplitude = 0.0;
  double quadrature_error = 0.0;
  // Bound on the q0^3 integral dropped beyond the horizon on both sides.
  double tail_bound = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

// q0 = integral^t sin(omega (t - s)) / omega J(s) ds and
// q1 = integral^t sin(omega (t - s)) / omega q0(s)^3 ds.
ClassicalPerturbativeResult classical_perturbative(const AnharmonicSpec& spec,
                                                   const signal::SincExpansion& J,
                                                   const TimeGrid& grid,
                                                   const ClassicalSettings& settings = {});

// Zeroth-order response at a single time, from the closed-form sinc primitive.
double q0_at(const signal::SincExpansion& J, double omega, double t);

// (1/sqrt(2 pi)) integral q0(s)^3 exp(-i nu s) ds over the same window as
// classical_perturbative.
quad::Estimate q0_cubed_spectrum(const signal::SincExpansion& J, double omega, double nu,
                                 const ClassicalSettings& settings = {});

}  // namespace superosc::anharmonic
