#include "superosc/anharmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "superosc/error.hpp"

namespace superosc::anharmonic {

namespace {

using std::numbers::pi;

// Columns with their largest-magnitude entry positive.
void fix_signs(Eigen::MatrixXd& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Eigen::Index arg = 0;
    v.col(j).cwiseAbs().maxCoeff(&arg);
    if (v(arg, j) < 0.0) v.col(j) *= -1.0;
  }
}

struct Window {
  double lo, hi;
};

Window spectrum_window(const signal::SincExpansion& J, const ClassicalSettings& settings) {
  const double h = settings.horizon > 0.0 ? settings.horizon : 400.0 * pi / J.bandlimit();
  return {J.support_min() - h, J.support_max() + h};
}

quad::PanelOptions cubed_panels(const signal::SincExpansion& J, double omega, double nu,
                                const ClassicalSettings& settings) {
  quad::PanelOptions opt = response::panel_options(J, omega, settings.quadrature);
  // q0^3 carries frequencies up to 3 max(omega, Omega); the kernel adds |nu|.
  const double fastest = std::abs(nu) + 3.0 * std::max(omega, J.bandlimit());
  opt.max_panel = std::min(opt.max_panel, pi / (2.0 * fastest));
  return opt;
}

// Integral of |q0|^3 beyond distance d from the nearest center, with
// |q0| <= (sum |b| / pi) / (omega^2 |s - c|) in the quasi-static tail.
double cubed_tail_bound(const signal::SincExpansion& J, double omega, double d) {
  const double e = J.weight_l1() / pi / (omega * omega);
  return d > 0.0 ? e * e * e / (2.0 * d * d) : std::numeric_limits<double>::infinity();
}

}  // namespace

void AnharmonicSpec::validate() const {
  require(std::isfinite(omega) && omega > 0.0, "omega must be finite and positive");
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be finite and non-negative");
  require(truncation >= 2, "truncation must be at least 2");
}

Eigen::MatrixXd ladder_position(std::size_t size, double omega) {
  const auto n = static_cast<Eigen::Index>(size);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double v = std::sqrt(static_cast<double>(k + 1) / (2.0 * omega));
    q(k, k + 1) = v;
    q(k + 1, k) = v;
  }
  return q;
}

Eigen::MatrixXd build_hamiltonian(const AnharmonicSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.truncation);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) h(k, k) = (static_cast<double>(k) + 0.5) * spec.omega;
  if (spec.lambda != 0.0) {
    const Eigen::MatrixXd q = ladder_position(spec.truncation + 4, spec.omega);
    const Eigen::MatrixXd q2 = q * q;
    const Eigen::MatrixXd q4 = q2 * q2;
    h += spec.lambda * q4.topLeftCorner(n, n);
  }
  return 0.5 * (h + h.transpose());
}

double first_order_shift(std::size_t n, double omega, double lambda) {
  const double x = static_cast<double>(n);
  return 3.0 * lambda * (2.0 * x * x + 2.0 * x + 1.0) / (4.0 * omega * omega);
}

SpectrumSummary diagonalize(const AnharmonicSpec& spec, bool check_convergence) {
  const Eigen::MatrixXd h = build_hamiltonian(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  if (eig.info() != Eigen::Success) fail(ErrorKind::IllConditioned, "eigensolver failed");

  SpectrumSummary out;
  out.omega = spec.omega;
  out.lambda = spec.lambda;
  out.eigenvalues = eig.eigenvalues();
  out.eigenvectors = eig.eigenvectors();
  fix_signs(out.eigenvectors);
  const Eigen::Index n = out.eigenvalues.size();
  out.gaps = out.eigenvalues.tail(n - 1) - out.eigenvalues.head(n - 1);

  const Eigen::MatrixXd q = ladder_position(spec.truncation, spec.omega);
  out.position_matrix = out.eigenvectors.transpose() * q * out.eigenvectors;
  out.position_matrix = 0.5 * (out.position_matrix + out.position_matrix.transpose()).eval();

  if (check_convergence) {
    AnharmonicSpec doubled = spec;
    doubled.truncation = 2 * spec.truncation;
    const Eigen::VectorXd big =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(build_hamiltonian(doubled),
                                                       Eigen::EigenvaluesOnly)
            .eigenvalues();
    const Eigen::Index half = std::max<Eigen::Index>(1, n / 2);
    out.convergence_change =
        (out.eigenvalues.head(half) - big.head(half)).cwiseAbs().maxCoeff();
    out.converged = out.convergence_change < 1e-8;
  } else {
    out.converged = spec.lambda == 0.0;
  }
  return out;
}

nlevel::QuantumSystemSpec to_quantum_system(const SpectrumSummary& summary, double delta) {
  nlevel::QuantumSystemSpec sys;
  sys.energies.assign(summary.eigenvalues.data(),
                      summary.eigenvalues.data() + summary.eigenvalues.size());
  sys.coupling = summary.position_matrix;
  sys.delta = delta;
  return sys;
}

double q0_at(const signal::SincExpansion& J, double omega, double t) {
  if (J.empty()) return 0.0;
  const cplx p = response::fourier_primitive(J, omega, t);
  return std::imag(std::polar(1.0, omega * t) * std::conj(p)) / omega;
}

quad::Estimate q0_cubed_spectrum(const signal::SincExpansion& J, double omega, double nu,
                                 const ClassicalSettings& settings) {
  if (J.empty()) return {};
  const Window w = spectrum_window(J, settings);
  auto f = [&](double s) {
    const double q = q0_at(J, omega, s);
    return q * q * q * std::polar(1.0, -nu * s);
  };
  quad::Estimate e = quad::integrate(f, w.lo, w.hi, cubed_panels(J, omega, nu, settings));
  const double norm = 1.0 / std::sqrt(2.0 * pi);
  e.value *= norm;
  e.error *= norm;
  return e;
}

ClassicalPerturbativeResult classical_perturbative(const AnharmonicSpec& spec,
                                                   const signal::SincExpansion& J,
                                                   const TimeGrid& grid,
                                                   const ClassicalSettings& settings) {
  spec.validate();
  const double omega = spec.omega;
  ClassicalPerturbativeResult out;
  out.omega = omega;
  out.times.assign(grid.times().begin(), grid.times().end());
  out.q0.assign(grid.size(), 0.0);
  out.q1.assign(grid.size(), 0.0);
  if (J.empty()) return out;

  const response::RunningIntegral p = response::running_fourier_integral(
      J, omega, grid, response::LowerLimit::MinusInfinity, settings.quadrature);
  for (std::size_t k = 0; k < grid.size(); ++k)
    out.q0[k] = std::imag(std::polar(1.0, omega * grid[k]) * std::conj(p.values[k])) / omega;
  out.quadrature_error = p.quadrature_error;

  const Window w = spectrum_window(J, settings);
  out.window_lo = std::min(w.lo, grid.empty() ? w.lo : grid.front());
  out.window_hi = std::max(w.hi, grid.empty() ? w.hi : grid.back());
  const quad::PanelOptions opt = cubed_panels(J, omega, omega, settings);
  auto f = [&](double s) {
    const double q = q0_at(J, omega, s);
    return q * q * q * std::polar(1.0, -omega * s);
  };

  // C1(t) = integral_{window_lo}^{t} exp(-i omega s) q0(s)^3 ds; q1 = Im(exp(i omega t) C1) / omega.
  cplx c1{};
  double cursor = out.window_lo;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const quad::Estimate e = quad::integrate(f, cursor, grid[k], opt);
    c1 += e.value;
    out.quadrature_error += e.error;
    cursor = grid[k];
    out.q1[k] = std::imag(std::polar(1.0, omega * grid[k]) * c1) / omega;
  }
  const quad::Estimate rest = quad::integrate(f, cursor, out.window_hi, opt);
  c1 += rest.value;
  out.quadrature_error += rest.error;

  out.q0_cubed_spectrum_at_omega = c1 / std::sqrt(2.0 * pi);
  out.q1_asymptotic_amplitude = std::abs(c1) / omega;
  out.q0_asymptotic_amplitude =
      std::sqrt(2.0 * pi) * std::abs(signal::evaluate_spectrum(J, omega)) / omega;
  out.tail_bound = cubed_tail_bound(J, omega, J.support_min() - out.window_lo) +
                   cubed_tail_bound(J, omega, out.window_hi - J.support_max());
  return out;
}

}  // namespace superosc::anharmonic
