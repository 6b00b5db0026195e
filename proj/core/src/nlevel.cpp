#include "superosc/nlevel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "superosc/error.hpp"

namespace superosc::nlevel {

void QuantumSystemSpec::validate() const {
  const auto n = static_cast<Eigen::Index>(energies.size());
  require(n >= 1, "system needs at least one level");
  require(coupling.rows() == n && coupling.cols() == n, "coupling must be N x N");
  require(std::isfinite(delta) && delta >= 0.0, "coupling strength must be finite and >= 0");
  for (std::size_t k = 0; k < energies.size(); ++k) {
    require(std::isfinite(energies[k]), "energies must be finite");
    if (k > 0) require(energies[k] >= energies[k - 1], "energies must be sorted ascending");
  }
  require(coupling.allFinite(), "coupling entries must be finite");
  const double scale = std::max(1.0, coupling.cwiseAbs().maxCoeff());
  require((coupling - coupling.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          "coupling matrix must be symmetric");
}

QuantumSystemSpec harmonic_ladder(std::size_t levels, double omega, double delta) {
  require(levels >= 1, "ladder needs at least one level");
  require(omega > 0.0, "oscillator frequency must be positive");
  QuantumSystemSpec sys;
  const auto n = static_cast<Eigen::Index>(levels);
  sys.energies.resize(levels);
  sys.coupling = Eigen::MatrixXd::Zero(n, n);
  sys.delta = delta;
  for (Eigen::Index k = 0; k < n; ++k) {
    sys.energies[static_cast<std::size_t>(k)] = (static_cast<double>(k) + 0.5) * omega;
    if (k + 1 < n) {
      const double q = std::sqrt(static_cast<double>(k + 1) / (2.0 * omega));
      sys.coupling(k, k + 1) = q;
      sys.coupling(k + 1, k) = q;
    }
  }
  return sys;
}

std::vector<cplx> perturbative_amplitude(const QuantumSystemSpec& sys,
                                         const signal::SincExpansion& J, std::size_t initial,
                                         std::size_t final_level, const TimeGrid& grid,
                                         const response::QuadratureSettings& settings) {
  sys.validate();
  require(initial < sys.levels() && final_level < sys.levels(), "level index out of range");
  require(initial != final_level, "perturbative amplitude needs distinct levels");
  const auto m = static_cast<Eigen::Index>(final_level);
  const auto n = static_cast<Eigen::Index>(initial);
  const double q = sys.coupling(m, n);
  std::vector<cplx> out(grid.size(), cplx{});
  if (q == 0.0 || sys.delta == 0.0 || J.empty()) return out;

  const double omega_mn = sys.energies[final_level] - sys.energies[initial];
  const auto raw = response::running_fourier_integral(J, omega_mn, grid,
                                                      response::LowerLimit::GridStart, settings);
  const cplx factor = cplx(0.0, -sys.delta * q);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = factor * raw.values[k];
  return out;
}

AmplitudeTrace integrate_exact(const QuantumSystemSpec& sys, const signal::SincExpansion& J,
                               std::size_t initial, const TimeGrid& grid, double ode_tol) {
  sys.validate();
  require(initial < sys.levels(), "initial level out of range");
  require(ode_tol > 0.0, "ODE tolerance must be positive");
  const auto n = static_cast<Eigen::Index>(sys.levels());

  AmplitudeTrace out;
  out.times.assign(grid.times().begin(), grid.times().end());
  out.coefficients.assign(grid.size(), Eigen::VectorXcd::Zero(n));
  if (grid.empty()) return out;

  Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(n);
  c0(static_cast<Eigen::Index>(initial)) = 1.0;

  const Eigen::VectorXd energies =
      Eigen::Map<const Eigen::VectorXd>(sys.energies.data(), n);
  const Eigen::MatrixXcd coupling = sys.coupling.cast<cplx>();
  const double delta = sys.delta;

  // c' = -i delta J(t) D(t) Q D(t)^* c with D = diag(exp(i E t)).
  auto rhs = [&](double t, const Eigen::VectorXcd& c) -> Eigen::VectorXcd {
    const double drive = delta * J(t);
    if (drive == 0.0) return Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd phase(n);
    for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, energies(k) * t);
    const Eigen::VectorXcd rotated = phase.conjugate().cwiseProduct(c);
    return cplx(0.0, -drive) * phase.cwiseProduct(coupling * rotated);
  };

  ode::Options opt;
  opt.rtol = ode_tol;
  opt.atol = ode_tol;
  // Keep the controller from stepping over a whole superoscillating stretch.
  const double fastest =
      std::max({J.bandlimit(), std::abs(energies.maxCoeff() - energies.minCoeff()), 1e-12});
  opt.max_step = std::numbers::pi / fastest;

  double drift = 0.0;
  out.stats = ode::dopri5<Eigen::VectorXcd>(
      rhs, grid.front(), c0, grid.times(), opt,
      [&](std::size_t k, double, const Eigen::VectorXcd& c) {
        out.coefficients[k] = c;
        drift = std::max(drift, std::abs(c.squaredNorm() - 1.0));
      });
  out.norm_drift = drift;

  const double span = grid.back() - grid.front();
  if (drift > 100.0 * ode_tol * std::max(span, 1.0))
    fail(ErrorKind::NormDriftExceeded,
         "norm drift " + std::to_string(drift) + " exceeds 100 * tol * span");
  return out;
}

}  // namespace superosc::nlevel
