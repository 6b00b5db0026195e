#include "superosc/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_expint.h>

#include <array>
#include <memory>
#include <mutex>
#include <numbers>

namespace superosc::quad {

namespace {

Rule compute_rule(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

double sine_integral(double x) { return gsl_sf_Si(x); }
double cosine_integral(double x) { return gsl_sf_Ci(x); }

// Integral of exp(i k u) / u over (-inf, -x], x > 0.
cplx exp_over_u_left(double k, double x) {
  const double z = std::abs(k) * x;
  const double sign = k > 0 ? 1.0 : -1.0;
  return {cosine_integral(z), sign * (0.5 * std::numbers::pi - sine_integral(z))};
}

cplx left_primitive(double bandlimit, double freq, double x_neg) {
  const double x = -x_neg;
  const double k_plus = freq + bandlimit;
  const double k_minus = freq - bandlimit;
  const cplx diff = exp_over_u_left(k_plus, x) - exp_over_u_left(k_minus, x);
  // (1/pi) * diff / (2i)
  return diff / cplx(0.0, 2.0 * std::numbers::pi);
}

cplx primitive_at_zero(double bandlimit, double freq) {
  const double real = 0.5 * sinc_fourier_total(bandlimit, freq);
  const double imag =
      -0.5 / std::numbers::pi * std::log(std::abs((bandlimit + freq) / (bandlimit - freq)));
  return {real, imag};
}

}  // namespace

const Rule& gauss_legendre(int order) {
  require(order >= 1 && order <= 128, "Gauss-Legendre order must be in [1, 128]");
  static std::array<std::unique_ptr<Rule>, 129> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto& slot = cache[static_cast<std::size_t>(order)];
  if (!slot) slot = std::make_unique<Rule>(compute_rule(order));
  return *slot;
}

double sinc_fourier_total(double bandlimit, double freq) {
  const double f = std::abs(freq);
  if (f < bandlimit) return 1.0;
  if (f == bandlimit) return 0.5;
  return 0.0;
}

cplx sinc_fourier_primitive(double bandlimit, double freq, double x) {
  silence_gsl();
  require(bandlimit > 0.0 && std::isfinite(bandlimit), "bandlimit must be positive");
  const double edge = std::abs(std::abs(freq) - bandlimit);
  if (edge <= 1e-14 * bandlimit)
    fail(ErrorKind::ResonanceInBand,
         "sinc tail integral diverges when the probe frequency equals the bandlimit");
  if (x == 0.0) return primitive_at_zero(bandlimit, freq);
  if (x < 0.0) return left_primitive(bandlimit, freq, x);
  // (-inf, x] = whole line minus [x, inf); mirror the right tail onto the left.
  return sinc_fourier_total(bandlimit, freq) - left_primitive(bandlimit, -freq, -x);
}

}  // namespace superosc::quad
