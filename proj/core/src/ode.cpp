#include "superosc/ode.hpp"

#include <array>

namespace superosc::ode {

namespace {

using cplx = std::complex<double>;

struct GaussTableau {
  std::array<double, 3> c;
  std::array<std::array<double, 3>, 3> a;
  std::array<double, 3> b;
};

GaussTableau gauss3() {
  const double r = std::sqrt(15.0);
  GaussTableau g;
  g.c = {0.5 - r / 10.0, 0.5, 0.5 + r / 10.0};
  g.a = {{{5.0 / 36.0, 2.0 / 9.0 - r / 15.0, 5.0 / 36.0 - r / 30.0},
          {5.0 / 36.0 + r / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r / 24.0},
          {5.0 / 36.0 + r / 30.0, 2.0 / 9.0 + r / 15.0, 5.0 / 36.0}}};
  g.b = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
  return g;
}

// One collocation step of y' = A(t) y with A = [[0, 1], [-w^2, 0]].
ModeState gauss_step(const GaussTableau& g, const SquaredFrequency& omega_sq, double t, double h,
                     const ModeState& y) {
  std::array<double, 3> w2;
  for (int j = 0; j < 3; ++j) w2[j] = omega_sq(t + g.c[j] * h);

  // Unknown stage values Y_i = (Q_i, P_i):
  //   Q_i - h sum_j a_ij P_j = q
  //   P_i + h sum_j a_ij w2_j Q_j = p
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Identity();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m(i, 3 + j) -= h * g.a[i][j];
      m(3 + i, j) += h * g.a[i][j] * w2[j];
    }
  }
  Eigen::Matrix<cplx, 6, 1> rhs;
  for (int i = 0; i < 3; ++i) {
    rhs(i) = y.q;
    rhs(3 + i) = y.dq;
  }
  const Eigen::Matrix<cplx, 6, 1> stages = m.cast<cplx>().partialPivLu().solve(rhs);

  ModeState out = y;
  for (int j = 0; j < 3; ++j) {
    out.q += h * g.b[j] * stages(3 + j);
    out.dq -= h * g.b[j] * w2[j] * stages(j);
  }
  return out;
}

double state_error(const ModeState& a, const ModeState& b, const Options& opt) {
  const double sq = opt.atol + opt.rtol * std::max(std::abs(a.q), std::abs(b.q));
  const double sp = opt.atol + opt.rtol * std::max(std::abs(a.dq), std::abs(b.dq));
  return std::max(std::abs(a.q - b.q) / sq, std::abs(a.dq - b.dq) / sp);
}

}  // namespace

Stats gauss_mode(const SquaredFrequency& omega_sq, double t0, ModeState y0,
                 std::span<const double> times, const Options& opt,
                 const std::function<void(std::size_t, double, const ModeState&)>& sample) {
  Stats stats;
  if (times.empty()) return stats;
  static const GaussTableau tableau = gauss3();
  const double t_final = times.back();
  const double direction = t_final >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t_final - t0);
  std::size_t next = 0;
  double t = t0;
  ModeState y = y0;

  auto emit_due = [&] {
    while (next < times.size() && (times[next] - t) * direction <= 0.0) {
      sample(next, times[next], y);
      ++next;
    }
  };
  emit_due();

  double h = opt.initial_step > 0.0 ? opt.initial_step : std::min(0.1, 0.01 * span);
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  while (next < times.size()) {
    if (stats.accepted + stats.rejected >= opt.max_steps)
      fail(ErrorKind::StepSizeUnderflow, "maximum number of mode-equation steps exceeded");
    // Land exactly on the next sample time.
    const double to_sample = std::abs(times[next] - t);
    const bool clipped = h >= to_sample;
    const double step = clipped ? to_sample : h;
    if (step < 1e-14 * std::max(1.0, std::abs(t)))
      fail(ErrorKind::StepSizeUnderflow, "mode-equation step underflow");
    const double hs = step * direction;

    const ModeState full = gauss_step(tableau, omega_sq, t, hs, y);
    const ModeState half = gauss_step(tableau, omega_sq, t, 0.5 * hs, y);
    const ModeState two = gauss_step(tableau, omega_sq, t + 0.5 * hs, 0.5 * hs, half);
    stats.rhs_evals += 9;
    // Richardson estimate for an order-6 method.
    const double err = state_error(two, full, opt) / 63.0;
    if (!(err <= 1.0)) {
      ++stats.rejected;
      h = step * std::max(0.2, std::isfinite(err) ? 0.9 * std::pow(err, -1.0 / 7.0) : 0.2);
      continue;
    }
    ++stats.accepted;
    t = clipped ? times[next] : t + hs;
    y = two;
    emit_due();
    const double grow = err > 0.0 ? std::min(4.0, 0.9 * std::pow(err, -1.0 / 7.0)) : 4.0;
    // A clipped step says nothing about the natural step; keep the old one.
    h = clipped ? std::max(h, step * grow) : step * std::max(0.2, grow);
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  }
  return stats;
}

}  // namespace superosc::ode
