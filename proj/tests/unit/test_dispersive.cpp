#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "superosc/dispersive.hpp"
#include "superosc/error.hpp"

using namespace superosc;
using namespace superosc::dispersive;

TEST(Dispersion, VietaIdentitiesOnGrid) {
  int count = 0;
  for (int i = 1; i <= 10; ++i)
    for (int j = 1; j <= 10; ++j) {
      const double scale = 0.5 * j;
      const double k = scale / 2 * (i / 10.5);
      const auto r = solve_dispersion(k, scale);
      ASSERT_EQ(r.branch, RootBranch::Real);
      EXPECT_NEAR(r.omega1 * r.omega2 / (k * scale), 1.0, 1e-12);
      EXPECT_NEAR((r.omega1 * r.omega1 + r.omega2 * r.omega2) / (scale * scale), 1.0, 1e-12);
      EXPECT_LE(relative_residual(r, r.omega1), 1e-12);
      EXPECT_LE(relative_residual(r, r.omega2), 1e-12);
      EXPECT_GE(r.omega1, r.omega2);
      ++count;
    }
  EXPECT_EQ(count, 100);
}

TEST(Dispersion, MatchesCompanionMatrixRoots) {
  const double k = 1.0, scale = 10.0;
  // monic quartic w^4 + 0 w^3 - L^2 w^2 + 0 w + k^2 L^2
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = companion(2, 1) = companion(3, 2) = 1.0;
  companion(0, 3) = -k * k * scale * scale;
  companion(2, 3) = scale * scale;
  const Eigen::Vector4cd ev = companion.eigenvalues();
  std::vector<double> positive;
  for (auto z : ev)
    if (z.real() > 0) positive.push_back(z.real());
  std::sort(positive.begin(), positive.end());
  ASSERT_EQ(positive.size(), 2u);
  const auto r = solve_dispersion(k, scale);
  EXPECT_NEAR(r.omega2 / positive[0], 1.0, 1e-10);
  EXPECT_NEAR(r.omega1 / positive[1], 1.0, 1e-10);
}

TEST(Dispersion, WideScaleLimit) {
  for (double k : {0.1, 1.0, 3.0}) {
    for (double ratio : {20.0, 50.0, 400.0}) {
      const double scale = ratio * k;
      const auto r = solve_dispersion(k, scale);
      const double bound = 2 * k * k / (scale * scale);
      EXPECT_LE(std::abs(r.omega1 / scale - 1.0), bound);
      EXPECT_LE(std::abs(r.omega2 / k - 1.0), bound);
    }
  }
}

TEST(Dispersion, DegenerateAndComplexBranches) {
  const auto d = solve_dispersion(1.0, 2.0);
  EXPECT_EQ(d.branch, RootBranch::Degenerate);
  EXPECT_NEAR(d.omega1, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(d.omega2, std::sqrt(2.0), 1e-12);
  EXPECT_THROW(greens_partial_fractions(d), Error);
  const auto c = solve_dispersion(1.5, 2.0);
  EXPECT_EQ(c.branch, RootBranch::Complex);
  EXPECT_FALSE(c.real());
  EXPECT_THROW(solve_dispersion(0.0, 1.0), Error);
  EXPECT_THROW(solve_dispersion(1.0, -1.0), Error);
}

TEST(Dispersion, VelocitiesMatchFiniteDifference) {
  const double scale = 10.0, k = 1.3, h = 1e-6;
  const auto r = solve_dispersion(k, scale);
  const auto up = solve_dispersion(k + h, scale), dn = solve_dispersion(k - h, scale);
  EXPECT_NEAR(r.group_velocity[0], (up.omega1 - dn.omega1) / (2 * h), 1e-6);
  EXPECT_NEAR(r.group_velocity[1], (up.omega2 - dn.omega2) / (2 * h), 1e-6);
  EXPECT_DOUBLE_EQ(r.phase_velocity[0], r.omega1 / k);
  EXPECT_DOUBLE_EQ(r.phase_velocity[1], r.omega2 / k);
}

TEST(PartialFractionsTest, RandomPointsAgainstRationalForm) {
  const auto r = solve_dispersion(1.0, 10.0);
  const auto pf = greens_partial_fractions(r);
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> nu_dist(0.0, 30.0);
  int checked = 0;
  while (checked < 100) {
    const double nu = nu_dist(rng);
    if (std::abs(nu - r.omega1) < 1e-3 || std::abs(nu - r.omega2) < 1e-3) continue;
    const double ref = 1.0 / ((nu * nu - r.omega1 * r.omega1) * (nu * nu - r.omega2 * r.omega2));
    EXPECT_NEAR(pf(nu) / ref, 1.0, 1e-12) << nu;
    ++checked;
  }
}

TEST(PartialFractionsTest, NearDegenerateRaises) {
  const auto r = solve_dispersion(1.0, 2.0 + 1e-14);
  try {
    greens_partial_fractions(r);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateRoots);
  }
}

namespace {
signal::SincExpansion drive() { return signal::SincExpansion(0.6, {-1.0, 0.0, 1.5}, {0.4, 1.0, -0.3}); }
}  // namespace

TEST(Driven, PathsAgree) {
  const auto r = solve_dispersion(1.0, 10.0);
  const auto grid = TimeGrid::uniform(-30.0, 60.0, 0.75);
  const auto band = driven_response(r, drive(), grid);
  const auto green = driven_response_green(r, drive(), grid, {1e-12});
  double peak = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_NEAR(band.q[k], green.q[k], 1e-8) << grid[k];
    peak = std::max(peak, std::abs(band.q[k]));
  }
  EXPECT_GT(peak, 1e-3);
}

TEST(Driven, DecaysBelowBothResonances) {
  const auto r = solve_dispersion(1.0, 10.0);
  const double period = 2 * std::numbers::pi / r.omega2;
  std::vector<double> times;
  for (double t = -20.0; t <= 20.0; t += 0.1) times.push_back(t);
  // sinc tails make the response fall off like 1/t
  const double late = 1e8;
  for (double t = late; t <= late + 10 * period; t += 0.1) times.push_back(t);
  const auto tr = driven_response_green(r, drive(), TimeGrid(times));
  double peak = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (times[k] < late)
      peak = std::max(peak, std::abs(tr.q[k]));
    else
      tail = std::max(tail, std::abs(tr.q[k]));
  EXPECT_LE(tail, 1e-6 * peak);
}

TEST(Driven, ZeroDriveAndResonanceGuard) {
  const auto r = solve_dispersion(1.0, 10.0);
  const auto grid = TimeGrid::uniform(0.0, 5.0, 1.0);
  for (double v : driven_response(r, signal::SincExpansion::zero(0.5), grid).q) EXPECT_EQ(v, 0.0);
  const signal::SincExpansion wide(1.5, {0.0}, {1.0});
  EXPECT_THROW(driven_response(r, wide, grid), Error);
  EXPECT_THROW(driven_response_green(r, wide, grid), Error);
}
