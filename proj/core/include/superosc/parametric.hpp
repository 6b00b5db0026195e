#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "superosc/grid.hpp"
#include "superosc/ode.hpp"

namespace superosc::parametric {

using cplx = std::complex<double>;

enum class ProfileKind { Constant, TanhStep, GaussianBump, Modulated };

// omega(t) for the mode equation q'' + omega(t)^2 q = 0.
//   Constant:      omega0
//   TanhStep:      omega_in + (omega_out - omega_in) (1 + tanh((t - center) / width)) / 2
//   GaussianBump:  omega0 + amplitude exp(-((t - center) / width)^2 / 2)
//   Modulated:     omega0 (1 + depth cos(mod_frequency (t - center)) exp(-((t - center) / width)^2 / 2))
struct FrequencyProfile {
  ProfileKind kind = ProfileKind::Constant;
  double omega0 = 1.0;
  double omega_in = 1.0;
  double omega_out = 1.0;
  double amplitude = 0.0;
  double depth = 0.0;
  double mod_frequency = 0.0;
  double center = 0.0;
  double width = 1.0;

  static FrequencyProfile constant(double omega);
  static FrequencyProfile tanh_step(double omega_in, double omega_out, double center, double width);
  static FrequencyProfile gaussian_bump(double omega0, double amplitude, double center,
                                        double width);
  static FrequencyProfile modulated(double omega0, double depth, double mod_frequency,
                                    double envelope_width, double center = 0.0);

  void validate() const;

  double omega(double t) const;
  double omega_dot(double t) const;
  double initial_frequency() const;  // omega(-inf)
  double final_frequency() const;    // omega(+inf)
  // Lower bound on omega(t) over the real line.
  double min_frequency() const;
  // |omega'(t) / omega(t)^2|
  double flatness(double t) const;
  // Times before and after which the profile is static to `threshold`.
  std::pair<double, double> static_bounds(double threshold = 1e-6) const;
};

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

inline constexpr double kFlatnessThreshold = 1e-6;

struct ModeTrace {
  std::vector<double> times;
  std::vector<cplx> q;
  std::vector<cplx> dq;
  // max |W(t) - W(t_start)| with W = q conj(q') - conj(q) q'
  double wronskian_drift = 0.0;
  double start_flatness = 0.0;
  ode::Stats stats;
};

struct ModeOptions {
  double ode_tol = 1e-11;
  std::size_t samples = 2001;  // uniform samples between t_start and t_end
};

// Plane-wave start q = exp(-i w t) / sqrt(2 w) at t_start with w = omega(t_start).
// Integration may run backwards (t_end < t_start).
ModeTrace integrate_mode(const FrequencyProfile& profile, double t_start, double t_end,
                         const ModeOptions& options = {});
ModeTrace integrate_mode(const FrequencyProfile& profile, double t_start, const TimeGrid& grid,
                         double ode_tol = 1e-11);

struct BogoliubovPair {
  cplx alpha{};
  cplx beta{};
  double normalization_residual = 0.0;  // | |alpha|^2 - |beta|^2 - 1 |
  double flatness_residual = 0.0;       // at the extraction time
  double excitation() const { return std::norm(beta); }  // <N_b> = |beta|^2
};

// Decomposes the final sample into alpha u + beta conj(u), u = exp(-i w t) / sqrt(2 w).
BogoliubovPair extract_bogoliubov(const ModeTrace& trace, const FrequencyProfile& profile);

// |alpha|, |beta| for an instantaneous jump omega1 -> omega2.
std::pair<double, double> sudden_step_coefficients(double omega1, double omega2);

struct ScanPoint {
  double mod_frequency = 0.0;
  double beta_sq = 0.0;
  double normalization_residual = 0.0;
  bool ok = false;
  std::string error;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::optional<std::size_t> argmax;
  // Largest |beta|^2 within a quarter of omega0 around omega0.
  std::optional<std::size_t> secondary;
};

struct ScanOptions {
  double ode_tol = 1e-11;
  // Integration covers center +- this many envelope widths, widened if needed
  // to reach static ends.
  double half_span_widths = 7.0;
};

// Modulated profile per grid frequency; failures are recorded and the scan continues.
ScanResult resonance_scan(double omega0, double depth, double envelope_width,
                          const std::vector<double>& mod_frequencies,
                          const ScanOptions& options = {});

// Least-squares slope of log sqrt(|q'|^2 + omega^2 |q|^2) over [t0, t1].
double fit_growth_rate(const ModeTrace& trace, const FrequencyProfile& profile, double t0,
                       double t1);

}  // namespace superosc::parametric
