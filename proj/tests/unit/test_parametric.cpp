#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "superosc/error.hpp"
#include "superosc/parametric.hpp"

using namespace superosc;
using namespace superosc::parametric;

namespace {

BogoliubovPair run(const FrequencyProfile& p) {
  const auto [lo, hi] = p.static_bounds();
  return extract_bogoliubov(integrate_mode(p, lo, hi), p);
}

}  // namespace

TEST(Profile, Validation) {
  EXPECT_THROW(FrequencyProfile::constant(0.0).validate(), Error);
  EXPECT_THROW(FrequencyProfile::tanh_step(1.0, 2.0, 0.0, -1.0).validate(), Error);
  EXPECT_THROW(FrequencyProfile::modulated(1.0, 1.5, 2.0, 10.0).validate(), Error);
  EXPECT_EQ(profile_kind_from_string(to_string(ProfileKind::Modulated)), ProfileKind::Modulated);
  EXPECT_THROW(profile_kind_from_string("square"), Error);
}

TEST(Profile, DerivativeMatchesFiniteDifference) {
  for (const auto& p : {FrequencyProfile::tanh_step(1.0, 2.5, 0.3, 0.7),
                        FrequencyProfile::gaussian_bump(1.0, 0.4, -1.0, 2.0),
                        FrequencyProfile::modulated(1.0, 0.2, 2.1, 5.0, 1.0)}) {
    for (double t : {-2.0, 0.1, 3.3}) {
      const double h = 1e-5;
      EXPECT_NEAR(p.omega_dot(t), (p.omega(t + h) - p.omega(t - h)) / (2 * h), 1e-8);
    }
    const auto [lo, hi] = p.static_bounds();
    EXPECT_LT(p.flatness(lo), kFlatnessThreshold);
    EXPECT_LT(p.flatness(hi), kFlatnessThreshold);
  }
}

TEST(Mode, ConstantFrequencyCreatesNothing) {
  const auto p = FrequencyProfile::constant(1.7);
  const auto b = extract_bogoliubov(integrate_mode(p, -20.0, 35.0), p);
  EXPECT_LT(std::abs(b.beta), 1e-8);
  EXPECT_NEAR(std::abs(b.alpha), 1.0, 1e-8);
}

TEST(Mode, WronskianAndNormalisationHold) {
  const auto p = FrequencyProfile::tanh_step(1.0, 3.0, 0.0, 0.4);
  const auto [lo, hi] = p.static_bounds();
  const auto tr = integrate_mode(p, lo, hi);
  EXPECT_LT(tr.wronskian_drift, 1e-10);
  const auto b = extract_bogoliubov(tr, p);
  EXPECT_LT(b.normalization_residual, 1e-8);
  EXPECT_GT(b.excitation(), 1e-4);
}

TEST(Mode, SuddenStepLimit) {
  const double w1 = 1.0, w2 = 4.0;
  const double analytic = std::abs(w2 - w1) / (2 * std::sqrt(w1 * w2));
  EXPECT_NEAR(sudden_step_coefficients(w1, w2).second, analytic, 1e-15);
  EXPECT_NEAR(sudden_step_coefficients(w1, w2).first, (w1 + w2) / (2 * std::sqrt(w1 * w2)), 1e-15);
  double prev = 1.0;
  for (double width : {0.1, 0.01, 1e-3, 1e-4}) {
    const auto b = run(FrequencyProfile::tanh_step(w1, w2, 0.0, width));
    const double err = std::abs(std::abs(b.beta) - analytic);
    EXPECT_LT(err, prev);
    prev = err;
    EXPECT_LT(b.normalization_residual, 1e-8);
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Mode, TimeReversedRunHasSameExcitation) {
  const auto p = FrequencyProfile::tanh_step(0.8, 2.2, 0.5, 0.3);
  const auto [lo, hi] = p.static_bounds();
  const auto fwd = extract_bogoliubov(integrate_mode(p, lo, hi), p);
  const auto bwd = extract_bogoliubov(integrate_mode(p, hi, lo), p);
  EXPECT_NEAR(std::abs(fwd.beta), std::abs(bwd.beta), 1e-8);
}

TEST(Mode, ExtractionNeedsStaticEnd) {
  const auto p = FrequencyProfile::tanh_step(1.0, 2.0, 0.0, 1.0);
  const auto tr = integrate_mode(p, p.static_bounds().first, 0.5);
  try {
    extract_bogoliubov(tr, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAsymptoticallyStatic);
  }
}

TEST(Mode, ZeroDepthModulationIsInert) {
  const auto b = run(FrequencyProfile::modulated(1.0, 0.0, 2.0, 10.0));
  EXPECT_LT(std::abs(b.beta), 1e-8);
}

TEST(Resonance, GrowthRateNearTwiceFrequency) {
  const double omega0 = 1.0, depth = 0.05;
  const auto p = FrequencyProfile::modulated(omega0, depth, 2 * omega0, 100.0);
  const auto tr = integrate_mode(p, p.static_bounds().first, 30.0, {1e-11, 20001});
  // Mathieu instability rate for omega^2 ~ omega0^2 (1 + 2 depth cos(2 omega0 t))
  EXPECT_NEAR(fit_growth_rate(tr, p, -20.0, 20.0), depth * omega0 / 2, 2e-3);
}

TEST(Resonance, ScanPeaksAtTwiceFrequency) {
  std::vector<double> freqs;
  const double step = 0.05;
  for (double f = 1.0; f <= 3.0 + 1e-9; f += step) freqs.push_back(f);
  const auto scan = resonance_scan(1.0, 0.05, 60.0, freqs);
  ASSERT_TRUE(scan.argmax.has_value());
  EXPECT_NEAR(scan.points[*scan.argmax].mod_frequency, 2.0, step + 1e-9);
  for (const auto& pt : scan.points) {
    EXPECT_TRUE(pt.ok) << pt.error;
    EXPECT_LT(pt.normalization_residual, 1e-8);
  }
}
