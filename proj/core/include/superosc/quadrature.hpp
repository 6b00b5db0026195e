#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "superosc/error.hpp"

namespace superosc::quad {

using cplx = std::complex<double>;

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of the given order (1..128), cached per order.
const Rule& gauss_legendre(int order);

struct PanelOptions {
  double max_panel = 0.1;      // widest allowed panel
  double tol_per_unit = 1e-9;  // absolute error budget per unit length
  int order = 10;              // Gauss-Legendre points per panel
  int max_depth = 30;          // bisection depth before TolUnachievable
};

struct Estimate {
  cplx value{};
  double error = 0.0;  // sum of |fine - coarse| over accepted panels
};

namespace detail {

template <class F>
void rule_on(const Rule& rule, F& f, double a, double b, cplx& sum, double& mag) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  sum = 0.0;
  mag = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const cplx v = f(mid + half * rule.nodes[k]);
    sum += rule.weights[k] * v;
    mag += rule.weights[k] * std::abs(v);
  }
  sum *= half;
  mag *= std::abs(half);
}

template <class F>
void adapt(const Rule& rule, F& f, double a, double b, cplx coarse, double coarse_mag, int depth,
           const PanelOptions& opt, Estimate& out) {
  const double m = 0.5 * (a + b);
  cplx left, right;
  double left_mag, right_mag;
  rule_on(rule, f, a, m, left, left_mag);
  rule_on(rule, f, m, b, right, right_mag);
  const cplx fine = left + right;
  const double err = std::abs(fine - coarse);
  // Roundoff floor: the difference cannot resolve below a few ulps of the
  // absolute integrand mass.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() *
                       std::max(coarse_mag, left_mag + right_mag);
  if (err <= std::max(opt.tol_per_unit * std::abs(b - a), floor)) {
    out.value += fine;
    out.error += err;
    return;
  }
  if (depth >= opt.max_depth)
    fail(ErrorKind::TolUnachievable, "panel refinement hit depth limit");
  adapt(rule, f, a, m, left, left_mag, depth + 1, opt, out);
  adapt(rule, f, m, b, right, right_mag, depth + 1, opt, out);
}

}  // namespace detail

// Composite adaptive Gauss-Legendre quadrature of a complex integrand over
// [a, b]. The interval is cut into equal panels no wider than max_panel and
// each panel is bisected until the coarse/fine difference meets the budget.
template <class F>
Estimate integrate(F&& f, double a, double b, const PanelOptions& opt) {
  Estimate out;
  if (b == a) return out;
  const Rule& rule = gauss_legendre(opt.order);
  const double span = b - a;
  const auto panels =
      static_cast<long long>(std::max(1.0, std::ceil(std::abs(span) / opt.max_panel - 1e-12)));
  const double h = span / static_cast<double>(panels);
  for (long long p = 0; p < panels; ++p) {
    const double lo = a + static_cast<double>(p) * h;
    const double hi = (p + 1 == panels) ? b : lo + h;
    cplx coarse;
    double mag;
    detail::rule_on(rule, f, lo, hi, coarse, mag);
    detail::adapt(rule, f, lo, hi, coarse, mag, 0, opt, out);
  }
  return out;
}

// Fixed (non-adaptive) Gauss-Legendre sum over [a, b].
template <class F>
cplx fixed(F&& f, double a, double b, int order) {
  cplx sum;
  double mag;
  detail::rule_on(gauss_legendre(order), f, a, b, sum, mag);
  return sum;
}

// Integral of sin(bandlimit u) / (pi u) * exp(i freq u) over (-inf, x].
// Closed form in the sine and cosine integrals; diverges when |freq| equals
// the bandlimit, which is reported as ResonanceInBand.
cplx sinc_fourier_primitive(double bandlimit, double freq, double x);

// Value of the same integral over the whole real line: 1, 1/2 or 0.
double sinc_fourier_total(double bandlimit, double freq);

}  // namespace superosc::quad
