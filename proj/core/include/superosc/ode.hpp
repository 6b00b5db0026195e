#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>

#include "superosc/error.hpp"

namespace superosc::ode {

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 picks a step from the initial derivative
  double max_step = 0.0;      // 0 means unbounded
  long max_steps = 50'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

// Dormand-Prince 5(4) with the standard fourth-order continuous extension.
// Integrates y' = rhs(t, y) from t0 and reports the dense-output solution at
// every requested sample time (which must be monotone in the direction of
// integration and not precede t0). `sample(k, t, y)` is called once per time.
template <class Vec, class Rhs, class Sample>
Stats dopri5(Rhs&& rhs, double t0, Vec y0, std::span<const double> times, const Options& opt,
             Sample&& sample) {
  using Scalar = typename Vec::Scalar;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  Stats stats;
  if (times.empty()) return stats;
  const double t_final = times.back();
  const double direction = t_final >= t0 ? 1.0 : -1.0;
  std::size_t next = 0;
  double t = t0;
  Vec y = std::move(y0);

  while (next < times.size() && (times[next] - t) * direction <= 0.0) {
    sample(next, times[next], y);
    ++next;
  }
  if (next == times.size()) return stats;

  const double span = std::abs(t_final - t0);
  Vec k1 = rhs(t, y);
  ++stats.rhs_evals;

  auto scaled_norm = [&](const Vec& err, const Vec& ya, const Vec& yb) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
      const double r = std::abs(err[i]) / sc;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
  };

  double h = opt.initial_step;
  if (h <= 0.0) {
    const double ynorm = y.template lpNorm<Eigen::Infinity>();
    const double fnorm = k1.template lpNorm<Eigen::Infinity>();
    h = (fnorm > 0.0) ? 0.01 * std::max(ynorm, opt.atol) / fnorm : 0.01 * span;
    h = std::min(h, 0.01 * span);
    h = std::max(h, 1e-6 * span);
  }
  const double max_step = opt.max_step > 0.0 ? opt.max_step : span;
  h = std::min(h, max_step);

  Vec k2, k3, k4, k5, k6, k7, ynew, yerr;
  while (next < times.size()) {
    if (stats.accepted + stats.rejected >= opt.max_steps)
      fail(ErrorKind::StepSizeUnderflow, "maximum number of ODE steps exceeded");
    const double remaining = std::abs(t_final - t);
    h = std::min({h, remaining, max_step});
    const double min_step = 1e-14 * std::max(1.0, std::abs(t));
    if (h < min_step)
      fail(ErrorKind::StepSizeUnderflow, "step size underflow at t = " + std::to_string(t));
    const double hs = h * direction;
    const Scalar hh = Scalar(hs);

    k2 = rhs(t + c2 * hs, y + hh * (a21 * k1));
    k3 = rhs(t + c3 * hs, y + hh * (a31 * k1 + a32 * k2));
    k4 = rhs(t + c4 * hs, y + hh * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = rhs(t + c5 * hs, y + hh * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = rhs(t + hs, y + hh * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    ynew = y + hh * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    k7 = rhs(t + hs, ynew);
    stats.rhs_evals += 6;
    yerr = hh * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double err = scaled_norm(yerr, y, ynew);
    if (!(err <= 1.0)) {
      ++stats.rejected;
      const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= fac;
      continue;
    }
    ++stats.accepted;
    const double t_new = (h == remaining) ? t_final : t + hs;

    // Continuous extension on [t, t_new].
    if ((times[next] - t_new) * direction <= 0.0) {
      const Vec ydiff = ynew - y;
      const Vec bspl = hh * k1 - ydiff;
      const Vec r4 = ydiff - hh * k7 - bspl;
      const Vec r5 = hh * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (next < times.size() && (times[next] - t_new) * direction <= 0.0) {
        const double theta = (times[next] - t) / hs;
        const double theta1 = 1.0 - theta;
        const Vec yi =
            y + Scalar(theta) *
                    (ydiff + Scalar(theta1) *
                                 (bspl + Scalar(theta) * (r4 + Scalar(theta1) * r5)));
        sample(next, times[next], yi);
        ++next;
      }
    }

    t = t_new;
    y.swap(ynew);
    k1.swap(k7);  // first-same-as-last
    const double fac = err > 0.0 ? std::min(5.0, 0.9 * std::pow(err, -0.2)) : 5.0;
    h *= std::max(0.2, fac);
  }
  return stats;
}

// Second-order linear mode equation q'' + w(t)^2 q = 0 for complex q,
// advanced with the three-stage Gauss-Legendre collocation method (order 6).
// Gauss methods conserve every quadratic invariant of a linear system, so the
// Wronskian q conj(q') - conj(q) q' is preserved to roundoff independently of
// the step size. Step size is controlled by step doubling.
struct ModeState {
  std::complex<double> q;
  std::complex<double> dq;
};

using SquaredFrequency = std::function<double(double)>;

Stats gauss_mode(const SquaredFrequency& omega_sq, double t0, ModeState y0,
                 std::span<const double> times, const Options& opt,
                 const std::function<void(std::size_t, double, const ModeState&)>& sample);

}  // namespace superosc::ode
