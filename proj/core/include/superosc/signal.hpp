#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace superosc::signal {

enum class Precision { Machine, Extended };

struct ConstraintPoint {
  double time = 0.0;
  double amplitude = 0.0;
};

// Prescribed amplitudes for an Omega-bandlimited function.
struct ConstraintSpec {
  double bandlimit = 0.0;  // angular frequency
  std::vector<ConstraintPoint> points;

  // Throws ValidationFailed / DuplicateTimes.
  void validate() const;
};

struct SolveOptions {
  Precision precision = Precision::Machine;
  // Above this estimated condition number a machine-precision solve is
  // redone in extended precision.
  double condition_threshold = 1e12;
};

// f(t) = sum_i b_i sin(Omega (t - t_i)) / (pi (t - t_i)).
class SincExpansion {
 public:
  SincExpansion() = default;
  SincExpansion(double bandlimit, std::vector<double> centers, std::vector<double> weights);

  static SincExpansion zero(double bandlimit);

  double bandlimit() const { return bandlimit_; }
  std::span<const double> centers() const { return centers_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return centers_.size(); }
  bool empty() const { return centers_.empty(); }

  double condition_number() const { return condition_number_; }
  Precision precision() const { return precision_; }
  // Set when the solve stayed above the conditioning threshold.
  bool ill_conditioned() const { return ill_conditioned_; }
  // Largest |f(t_i) - a_i| measured after the solve (0 if not solved).
  double max_residual() const { return max_residual_; }
  // a^T S^{-1} a as computed in the solve's working precision.
  double constraint_energy() const { return constraint_energy_; }

  double operator()(double t) const;
  double derivative(double t) const;

  // Signal with every weight multiplied by `factor`.
  SincExpansion scaled(double factor) const;
  // Sum of two expansions sharing a bandlimit.
  SincExpansion plus(const SincExpansion& other) const;

  // Smallest and largest center; both 0 for an empty expansion.
  double support_min() const;
  double support_max() const;
  // Upper bound on |f(t)| from the sinc tails: sum |b_i| / (pi |t - t_i|).
  double tail_envelope(double t) const;
  double weight_l1() const;

 private:
  friend SincExpansion solve_min_norm(const ConstraintSpec&, const SolveOptions&);

  double bandlimit_ = 1.0;
  std::vector<double> centers_;
  std::vector<double> weights_;
  double condition_number_ = 1.0;
  Precision precision_ = Precision::Machine;
  bool ill_conditioned_ = false;
  double max_residual_ = 0.0;
  double constraint_energy_ = 0.0;
};

// sin(Omega x) / (pi x), with the series limit for |x| < 1e-8.
double sinc_kernel(double bandlimit, double x);

Eigen::MatrixXd gram_matrix(const ConstraintSpec& spec);

SincExpansion solve_min_norm(const ConstraintSpec& spec, const SolveOptions& options = {});

inline double evaluate(const SincExpansion& f, double t) { return f(t); }

// (1/sqrt(2 pi)) sum_i b_i exp(-i w t_i) inside the band, exactly zero outside.
std::complex<double> evaluate_spectrum(const SincExpansion& f, double omega);

// b^T S b, the squared L2 norm of the expansion on the real line.
double squared_norm(const SincExpansion& f);

// Residual bound promised by solve_min_norm for this spec.
double residual_bound(const SincExpansion& f, const ConstraintSpec& spec);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double t) const { return t >= lo && t <= hi; }
};

struct SignalCharacterization {
  Interval window;
  Interval scan;
  double peak_inside = 0.0;
  double peak_inside_time = 0.0;
  double peak_outside = 0.0;
  double peak_outside_time = 0.0;
  double dynamic_range = 0.0;
  std::vector<double> zero_crossings;
  // Twice the median spacing of consecutive zero crossings in the window;
  // empty when fewer than two crossings were found.
  std::optional<double> local_period_estimate;
};

// The constraint hull [min t_i, max t_i].
Interval constraint_window(const ConstraintSpec& spec);

// Window widened by ten sidelobe widths (10 pi / Omega) on each side.
Interval default_scan(const SincExpansion& f, Interval window);

SignalCharacterization characterize(const SincExpansion& f, Interval window, Interval scan,
                                    double grid_step);

}  // namespace superosc::signal
