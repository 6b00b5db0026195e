#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "superosc/grid.hpp"
#include "superosc/response.hpp"
#include "superosc/signal.hpp"

namespace superosc::harmonic {

using cplx = std::complex<double>;

struct HarmonicOptions {
  response::QuadratureSettings quadrature;
  response::LowerLimit lower = response::LowerLimit::MinusInfinity;
  // Highest level kept; chosen from the Poisson tail when empty.
  std::optional<std::size_t> max_level;
  double poisson_tail_target = 1e-12;
  std::size_t max_auto_level = 1024;
};

// Ground-state overlaps in both conventions that appear for the driven oscillator.
struct OverlapTraces {
  std::vector<double> times;
  // exp(-|S|^2 / 2): overlap with the instantaneous ground state.
  std::vector<double> instantaneous;
  // exp(Phi(t)) = <0|psi(t)> from the closed-form coefficients.
  std::vector<cplx> schrodinger;
  // exp(-|S|^2): the other late-time convention for |<0|psi(t)>|.
  std::vector<double> asymptotic_form;
};

struct HarmonicDriveResult {
  double frequency = 0.0;
  response::ResponseTrace trace;
  // Phi(t) = (-i / sqrt(2 omega)) integral^t J(s) exp(-i omega s) S(s) ds.
  std::vector<cplx> phase_integral;
  OverlapTraces overlap;
  std::size_t max_level = 0;
  // level_amplitudes[k][n] = c_n(t_k), n = 0..max_level.
  std::vector<std::vector<cplx>> level_amplitudes;
  // Poisson mass above max_level at each time.
  std::vector<double> poisson_tail;
  // Rough size of the imaginary part of Phi dropped before the first panel.
  double phase_tail_estimate = 0.0;
};

// P(X > n) for X ~ Poisson(mean).
double poisson_upper_tail(std::size_t n, double mean);

// Smallest n with P(X > n) below target, capped at `cap`.
std::size_t level_cutoff(double mean, double target, std::size_t cap);

// <0|N(t)|0> = |S_omega(t)|^2.
std::vector<double> number_expectation(const signal::SincExpansion& J, double omega,
                                       const TimeGrid& grid, const HarmonicOptions& options = {});

OverlapTraces ground_state_overlap(const signal::SincExpansion& J, double omega,
                                   const TimeGrid& grid, const HarmonicOptions& options = {});

// c_n(t) = exp(Phi(t)) S(t)^n / sqrt(n!), for the drive H_I = q J(t).
HarmonicDriveResult closed_form_coefficients(const signal::SincExpansion& J, double omega,
                                             const TimeGrid& grid,
                                             const HarmonicOptions& options = {});

}  // namespace superosc::harmonic
