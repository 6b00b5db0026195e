#include "superosc/signal.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "superosc/error.hpp"

namespace superosc::signal {

namespace {

using Extended = boost::multiprecision::cpp_bin_float_50;
using ExtMatrix = Eigen::Matrix<Extended, Eigen::Dynamic, Eigen::Dynamic>;
using ExtVector = Eigen::Matrix<Extended, Eigen::Dynamic, 1>;

constexpr double kDuplicateTolerance = 1e-12;
constexpr double kSeriesCutoff = 1e-8;

template <class Real>
Real kernel_entry(const Real& bandlimit, const Real& dt) {
  using std::sin;
  using boost::multiprecision::sin;
  const Real pi = boost::math::constants::pi<Real>();
  if (dt == 0) return bandlimit / pi;
  return sin(bandlimit * dt) / (pi * dt);
}

ExtMatrix extended_gram(const ConstraintSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.points.size());
  const Extended pi = boost::math::constants::pi<Extended>();
  const Extended omega(spec.bandlimit);
  ExtMatrix s(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s(j, j) = omega / pi;
    for (Eigen::Index i = 0; i < j; ++i) {
      const Extended dt = Extended(spec.points[j].time) - Extended(spec.points[i].time);
      s(j, i) = s(i, j) = kernel_entry(omega, dt);
    }
  }
  return s;
}

double measured_residual(const SincExpansion& f, const ConstraintSpec& spec) {
  double worst = 0.0;
  for (const auto& p : spec.points) worst = std::max(worst, std::abs(f(p.time) - p.amplitude));
  return worst;
}

double max_amplitude(const ConstraintSpec& spec) {
  double m = 0.0;
  for (const auto& p : spec.points) m = std::max(m, std::abs(p.amplitude));
  return m;
}


// Largest eigenvalue from the double copy, smallest by inverse power
// iteration on the extended factorization.
double extended_condition(const ExtMatrix& se, const Eigen::LLT<ExtMatrix>& llt) {
  const Eigen::Index n = se.rows();
  Eigen::MatrixXd sd(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) sd(i, j) = static_cast<double>(se(i, j));
  const double hi = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sd, Eigen::EigenvaluesOnly)
                        .eigenvalues()
                        .maxCoeff();
  ExtVector v = ExtVector::Ones(n);
  Extended inv_lo = 0;
  for (int it = 0; it < 200; ++it) {
    ExtVector w = llt.solve(v);
    Extended norm = 0;
    for (Eigen::Index i = 0; i < n; ++i) norm += w(i) * w(i);
    norm = sqrt(norm);
    if (norm == 0) break;
    const Extended prev = inv_lo;
    inv_lo = norm;
    v = w / norm;
    if (it > 5 && abs(inv_lo - prev) <= Extended(1e-12) * inv_lo) break;
  }
  return inv_lo > 0 ? hi * static_cast<double>(inv_lo) : std::numeric_limits<double>::infinity();
}

}  // namespace

void ConstraintSpec::validate() const {
  require(std::isfinite(bandlimit) && bandlimit > 0.0, "bandlimit must be finite and positive");
  require(!points.empty(), "at least one constraint point is required");
  for (const auto& p : points)
    require(std::isfinite(p.time) && std::isfinite(p.amplitude),
            "constraint times and amplitudes must be finite");
  std::vector<double> times;
  times.reserve(points.size());
  for (const auto& p : points) times.push_back(p.time);
  std::sort(times.begin(), times.end());
  for (std::size_t k = 1; k < times.size(); ++k)
    if (times[k] - times[k - 1] <= kDuplicateTolerance)
      fail(ErrorKind::DuplicateTimes,
           "constraint times coincide near t = " + std::to_string(times[k]));
}

double sinc_kernel(double bandlimit, double x) {
  if (std::abs(x) < kSeriesCutoff) {
    const double ox = bandlimit * x;
    return bandlimit / std::numbers::pi * (1.0 - ox * ox / 6.0);
  }
  return std::sin(bandlimit * x) / (std::numbers::pi * x);
}

SincExpansion::SincExpansion(double bandlimit, std::vector<double> centers,
                             std::vector<double> weights)
    : bandlimit_(bandlimit), centers_(std::move(centers)), weights_(std::move(weights)) {
  require(std::isfinite(bandlimit_) && bandlimit_ > 0.0, "bandlimit must be finite and positive");
  require(centers_.size() == weights_.size(), "centers and weights must have equal length");
}

SincExpansion SincExpansion::zero(double bandlimit) { return SincExpansion(bandlimit, {}, {}); }

double SincExpansion::operator()(double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i)
    sum += weights_[i] * sinc_kernel(bandlimit_, t - centers_[i]);
  return sum;
}

double SincExpansion::derivative(double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double x = t - centers_[i];
    if (std::abs(x) < kSeriesCutoff) {
      sum += weights_[i] * (-bandlimit_ * bandlimit_ * bandlimit_ * x / (3.0 * std::numbers::pi));
    } else {
      const double ox = bandlimit_ * x;
      sum += weights_[i] * (ox * std::cos(ox) - std::sin(ox)) / (std::numbers::pi * x * x);
    }
  }
  return sum;
}

SincExpansion SincExpansion::scaled(double factor) const {
  SincExpansion out = *this;
  for (double& w : out.weights_) w *= factor;
  out.max_residual_ *= std::abs(factor);
  out.constraint_energy_ *= factor * factor;
  return out;
}

SincExpansion SincExpansion::plus(const SincExpansion& other) const {
  require(bandlimit_ == other.bandlimit_, "cannot add expansions with different bandlimits");
  std::vector<double> centers = centers_;
  std::vector<double> weights = weights_;
  centers.insert(centers.end(), other.centers_.begin(), other.centers_.end());
  weights.insert(weights.end(), other.weights_.begin(), other.weights_.end());
  return SincExpansion(bandlimit_, std::move(centers), std::move(weights));
}

double SincExpansion::support_min() const {
  return centers_.empty() ? 0.0 : *std::min_element(centers_.begin(), centers_.end());
}

double SincExpansion::support_max() const {
  return centers_.empty() ? 0.0 : *std::max_element(centers_.begin(), centers_.end());
}

double SincExpansion::tail_envelope(double t) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double d = std::abs(t - centers_[i]);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    sum += std::abs(weights_[i]) / (std::numbers::pi * d);
  }
  return sum;
}

double SincExpansion::weight_l1() const {
  double s = 0.0;
  for (double w : weights_) s += std::abs(w);
  return s;
}

Eigen::MatrixXd gram_matrix(const ConstraintSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.points.size());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s(j, j) = spec.bandlimit / std::numbers::pi;
    for (Eigen::Index i = 0; i < j; ++i) {
      const double dt = spec.points[j].time - spec.points[i].time;
      s(j, i) = s(i, j) = std::sin(spec.bandlimit * dt) / (std::numbers::pi * dt);
    }
  }
  return s;
}

SincExpansion solve_min_norm(const ConstraintSpec& spec, const SolveOptions& options) {
  const Eigen::MatrixXd s = gram_matrix(spec);
  const auto n = static_cast<Eigen::Index>(spec.points.size());
  Eigen::VectorXd a(n);
  std::vector<double> centers(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i) = spec.points[static_cast<std::size_t>(i)].amplitude;
    centers[static_cast<std::size_t>(i)] = spec.points[static_cast<std::size_t>(i)].time;
  }

  SincExpansion out;
  bool need_extended = options.precision == Precision::Extended;

  if (!need_extended) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (cond > options.condition_threshold || llt.info() != Eigen::Success) {
      need_extended = true;
    } else {
      const Eigen::VectorXd b = llt.solve(a);
      out = SincExpansion(spec.bandlimit, centers,
                          std::vector<double>(b.data(), b.data() + b.size()));
      out.condition_number_ = cond;
      out.precision_ = Precision::Machine;
      out.constraint_energy_ = a.dot(b);
    }
  }

  if (need_extended) {
    const ExtMatrix se = extended_gram(spec);
    Eigen::LLT<ExtMatrix> llt(se);
    if (llt.info() != Eigen::Success)
      fail(ErrorKind::IllConditioned, "Gram matrix is not numerically positive definite");
    const double cond = extended_condition(se, llt);
    ExtVector ae(n);
    for (Eigen::Index i = 0; i < n; ++i) ae(i) = Extended(a(i));
    const ExtVector be = llt.solve(ae);
    std::vector<double> weights(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) weights[static_cast<std::size_t>(i)] = static_cast<double>(be(i));
    out = SincExpansion(spec.bandlimit, centers, std::move(weights));
    out.condition_number_ = cond;
    out.precision_ = Precision::Extended;
    out.constraint_energy_ = static_cast<double>(ae.dot(be));
  }

  out.ill_conditioned_ = out.condition_number_ > options.condition_threshold;
  out.max_residual_ = measured_residual(out, spec);
  if (out.max_residual_ > residual_bound(out, spec)) {
    if (out.precision_ == Precision::Machine) {
      SolveOptions retry = options;
      retry.precision = Precision::Extended;
      return solve_min_norm(spec, retry);
    }
    fail(ErrorKind::IllConditioned,
         "interpolation residual " + std::to_string(out.max_residual_) +
             " exceeds bound after extended-precision solve (condition number " +
             std::to_string(out.condition_number_) + ")");
  }
  return out;
}

double residual_bound(const SincExpansion& f, const ConstraintSpec& spec) {
  return std::max(1e-9, f.condition_number() * std::numeric_limits<double>::epsilon() *
                            max_amplitude(spec));
}

std::complex<double> evaluate_spectrum(const SincExpansion& f, double omega) {
  if (std::abs(omega) > f.bandlimit()) return {0.0, 0.0};
  std::complex<double> sum{0.0, 0.0};
  const auto centers = f.centers();
  const auto weights = f.weights();
  for (std::size_t i = 0; i < centers.size(); ++i)
    sum += weights[i] * std::polar(1.0, -omega * centers[i]);
  return sum / std::sqrt(2.0 * std::numbers::pi);
}

double squared_norm(const SincExpansion& f) {
  const auto c = f.centers();
  const auto w = f.weights();
  double sum = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t i = 0; i < c.size(); ++i)
      sum += w[j] * w[i] * kernel_entry(f.bandlimit(), c[j] - c[i]);
  return sum;
}

Interval constraint_window(const ConstraintSpec& spec) {
  require(!spec.points.empty(), "constraint spec has no points");
  Interval w{spec.points.front().time, spec.points.front().time};
  for (const auto& p : spec.points) {
    w.lo = std::min(w.lo, p.time);
    w.hi = std::max(w.hi, p.time);
  }
  return w;
}

Interval default_scan(const SincExpansion& f, Interval window) {
  const double margin = 10.0 * std::numbers::pi / f.bandlimit();
  return {window.lo - margin, window.hi + margin};
}

namespace {

// Golden-section maximisation of |f| on [a, b].
std::pair<double, double> refine_peak(const SincExpansion& f, double a, double b) {
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = std::abs(f(c));
  double fd = std::abs(f(d));
  for (int iter = 0; iter < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(a)); ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = std::abs(f(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = std::abs(f(d));
    }
  }
  const double t = 0.5 * (a + b);
  return {t, std::abs(f(t))};
}

double bisect_zero(const SincExpansion& f, double a, double b) {
  double fa = f(a);
  for (int iter = 0; iter < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++iter) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct PeakTracker {
  double value = -1.0;
  double time = 0.0;
  std::size_t index = 0;
};

}  // namespace

SignalCharacterization characterize(const SincExpansion& f, Interval window, Interval scan,
                                    double grid_step) {
  require(grid_step > 0.0 && std::isfinite(grid_step), "grid step must be positive");
  require(window.hi >= window.lo, "window must be a non-empty interval");
  require(scan.lo <= window.lo && scan.hi >= window.hi, "scan range must contain the window");

  const auto n = static_cast<std::size_t>(std::floor((scan.hi - scan.lo) / grid_step + 1e-9)) + 1;
  std::vector<double> ts(n), vs(n);
  for (std::size_t k = 0; k < n; ++k) {
    ts[k] = scan.lo + static_cast<double>(k) * grid_step;
    vs[k] = f(ts[k]);
  }

  PeakTracker inside, outside;
  std::size_t inside_count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = std::abs(vs[k]);
    if (window.contains(ts[k])) {
      ++inside_count;
      if (v > inside.value) inside = {v, ts[k], k};
    } else if (v > outside.value) {
      outside = {v, ts[k], k};
    }
  }
  if (inside_count == 0) fail(ErrorKind::EmptyWindow, "no grid points fall inside the window");

  SignalCharacterization out;
  out.window = window;
  out.scan = scan;

  auto refine_within = [&](const PeakTracker& p, Interval region, bool inside_region) {
    double a = std::max(ts[p.index] - grid_step, scan.lo);
    double b = std::min(ts[p.index] + grid_step, scan.hi);
    if (inside_region) {
      a = std::max(a, region.lo);
      b = std::min(b, region.hi);
    }
    auto [t, v] = refine_peak(f, a, b);
    // Refinement outside the window must not stray into it.
    if (!inside_region && region.contains(t)) return std::pair{p.time, p.value};
    if (v < p.value) return std::pair{p.time, p.value};
    return std::pair{t, v};
  };

  std::tie(out.peak_inside_time, out.peak_inside) = refine_within(inside, window, true);
  if (outside.value >= 0.0) {
    std::tie(out.peak_outside_time, out.peak_outside) = refine_within(outside, window, false);
  }
  out.dynamic_range = out.peak_inside > 0.0 ? out.peak_outside / out.peak_inside
                                            : std::numeric_limits<double>::infinity();

  for (std::size_t k = 1; k < n; ++k) {
    if (!window.contains(ts[k - 1]) || !window.contains(ts[k])) continue;
    if (vs[k - 1] == 0.0) {
      out.zero_crossings.push_back(ts[k - 1]);
    } else if ((vs[k - 1] < 0.0) != (vs[k] < 0.0) && vs[k] != 0.0) {
      out.zero_crossings.push_back(bisect_zero(f, ts[k - 1], ts[k]));
    }
  }
  if (out.zero_crossings.size() >= 2) {
    std::vector<double> gaps;
    for (std::size_t k = 1; k < out.zero_crossings.size(); ++k)
      gaps.push_back(out.zero_crossings[k] - out.zero_crossings[k - 1]);
    std::sort(gaps.begin(), gaps.end());
    const std::size_t m = gaps.size();
    const double median = (m % 2 == 1) ? gaps[m / 2] : 0.5 * (gaps[m / 2 - 1] + gaps[m / 2]);
    out.local_period_estimate = 2.0 * median;
  }
  return out;
}

}  // namespace superosc::signal
