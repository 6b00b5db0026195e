#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "oracles.hpp"
#include "superosc/anharmonic.hpp"
#include "superosc/error.hpp"
#include "superosc/harmonic.hpp"

using namespace superosc;
using namespace superosc::anharmonic;
using std::numbers::pi;

namespace {

// <m|q^4|n> by applying q = (a + a^dagger) / sqrt(2 omega) to |n> in an unbounded basis.
double quartic_element(std::size_t m, std::size_t n, double omega) {
  std::map<std::size_t, double> v{{n, 1.0}};
  for (int k = 0; k < 4; ++k) {
    std::map<std::size_t, double> w;
    for (auto [j, c] : v) {
      w[j + 1] += c * std::sqrt(j + 1.0);
      if (j > 0) w[j - 1] += c * std::sqrt(double(j));
    }
    v = std::move(w);
  }
  const auto it = v.find(m);
  return it == v.end() ? 0.0 : it->second / (4.0 * omega * omega);
}

}  // namespace

TEST(Spectrum, QuarticEntriesMatchLadderAlgebra) {
  AnharmonicSpec spec{1.3, 0.25, 10};
  const auto h = build_hamiltonian(spec);
  ASSERT_EQ(h.rows(), 10);
  for (std::size_t m = 0; m < 10; ++m)
    for (std::size_t n = 0; n < 10; ++n) {
      const double h0 = m == n ? (n + 0.5) * 1.3 : 0.0;
      EXPECT_NEAR(h(m, n), h0 + 0.25 * quartic_element(m, n, 1.3), 1e-12) << m << " " << n;
    }
}

TEST(Spectrum, Validation) {
  EXPECT_THROW((AnharmonicSpec{0.0, 1.0, 8}).validate(), Error);
  EXPECT_THROW((AnharmonicSpec{1.0, -1.0, 8}).validate(), Error);
  EXPECT_THROW((AnharmonicSpec{1.0, 1.0, 1}).validate(), Error);
}

TEST(Spectrum, HarmonicLimit) {
  const auto s = diagonalize({0.7, 0.0, 16});
  for (int n = 0; n < s.gaps.size(); ++n) EXPECT_NEAR(s.gaps(n), 0.7, 1e-10);
  EXPECT_LT((s.position_matrix - ladder_position(16, 0.7)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(s.converged);
}

TEST(Spectrum, EigenvectorsOrthonormal) {
  const auto s = diagonalize({1.0, 1.0, 16});
  const Eigen::MatrixXd g = s.eigenvectors.transpose() * s.eigenvectors;
  EXPECT_LT((g - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((s.position_matrix - s.position_matrix.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Spectrum, SmallCouplingFollowsFirstOrderShift) {
  const double omega = 1.0;
  for (std::size_t n = 0; n < 4; ++n) {
    double prev = 0.0;
    for (double lambda : {2e-3, 1e-3, 5e-4}) {
      const auto s = diagonalize({omega, lambda, 24}, false);
      const double resid = s.eigenvalues(n) - (n + 0.5) * omega - first_order_shift(n, omega, lambda);
      if (prev != 0.0) {
        EXPECT_NEAR(prev / resid, 4.0, 0.1) << n << " " << lambda;
      }
      prev = resid;
    }
  }
}

TEST(Spectrum, StrongCouplingGapsIncrease) {
  const auto s = diagonalize({1.0, 1.0, 16});
  for (int n = 1; n < 7; ++n) EXPECT_GT(s.gaps(n), s.gaps(n - 1)) << n;
}

TEST(Spectrum, HarmonicLimitDrivesLikeClosedForm) {
  const double omega = 0.9;
  const auto s = diagonalize({omega, 0.0, 12});
  const auto sys = to_quantum_system(s, 1.0);
  const signal::SincExpansion J(1.0, {-1.0, 0.5, 2.0}, {0.5, -0.3, 0.2});
  const auto grid = TimeGrid::uniform(-20.0, 20.0, 4.0);
  const auto exact = nlevel::integrate_exact(sys, J, 0, grid, 1e-12);
  harmonic::HarmonicOptions opt;
  opt.lower = response::LowerLimit::GridStart;
  opt.max_level = 11;
  const auto closed = harmonic::closed_form_coefficients(J, omega, grid, opt);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t n = 0; n < 12; ++n)
      EXPECT_LT(std::abs(exact.coefficients[k](n) - closed.level_amplitudes[k][n]), 1e-6);
}

TEST(Classical, ZeroDrive) {
  const auto r = classical_perturbative({1.0, 1.0, 8}, signal::SincExpansion::zero(0.6),
                                        TimeGrid::uniform(-5, 5, 1));
  for (double v : r.q0) EXPECT_EQ(v, 0.0);
  for (double v : r.q1) EXPECT_EQ(v, 0.0);
}

TEST(Classical, ZerothOrderMatchesOscillatorOde) {
  const double omega = 1.0;
  const signal::SincExpansion J(0.6, {0.0}, {1.0});
  auto drive = [](double t) { return std::abs(t) < 1e-9 ? 0.6 / pi : std::sin(0.6 * t) / (pi * t); };
  // the response to the sinc tail beyond -t0 is ~1/t0, so start far out
  const double t0 = -4000.0;
  auto rhs = [&](double t, const oracle::State& y) {
    return oracle::State{y[1], drive(t) - omega * omega * y[0]};
  };
  oracle::State y{0.0, 0.0};
  double t = t0;
  for (double target : {-10.0, 0.0, 7.5}) {
    y = oracle::rk4(rhs, t, y, target, int((target - t) / 0.02));
    t = target;
    EXPECT_NEAR(q0_at(J, omega, target), y[0].real(), 2e-4) << target;
  }
}

TEST(Classical, CubedResponseIsBandLimitedToThreeOmega) {
  const signal::SincExpansion J(0.6, {0.0}, {1.0});
  const double at_omega = std::abs(q0_cubed_spectrum(J, 1.0, 1.0).value);
  const double outside = std::abs(q0_cubed_spectrum(J, 1.0, 2.4).value);
  EXPECT_GT(at_omega, 1e-3);
  EXPECT_LT(outside, 1e-3 * at_omega);
}

TEST(Classical, FractionalResonanceAmplitude) {
  const double omega = 1.0;
  const signal::SincExpansion J(0.6, {0.0}, {1.0});
  std::vector<double> late;
  for (double t = 3000.0; t <= 3000.0 + 2 * pi; t += 0.05) late.push_back(t);
  const auto r = classical_perturbative({omega, 1.0, 8}, J, TimeGrid(late));
  double amp1 = 0.0, amp0 = 0.0;
  for (std::size_t k = 0; k < late.size(); ++k) {
    amp1 = std::max(amp1, std::abs(r.q1[k]));
    amp0 = std::max(amp0, std::abs(r.q0[k]));
  }
  EXPECT_LT(amp0, 1e-3);  // 1/t tail of the sinc at t = 3000
  EXPECT_EQ(r.q0_asymptotic_amplitude, 0.0);
  EXPECT_NEAR(amp1, r.q1_asymptotic_amplitude, 0.01 * r.q1_asymptotic_amplitude);
}
