#include <benchmark/benchmark.h>

#include <numbers>

#include "superosc/anharmonic.hpp"
#include "superosc/dispersive.hpp"
#include "superosc/harmonic.hpp"
#include "superosc/parametric.hpp"
#include "superosc/response.hpp"
#include "superosc/signal.hpp"

using namespace superosc;
using std::numbers::pi;

namespace {

signal::ConstraintSpec alternating(int half) {
  signal::ConstraintSpec spec;
  spec.bandlimit = pi / 2;
  for (int n = -half; n <= half; ++n) spec.points.push_back({double(n), n % 2 == 0 ? 1.0 : -1.0});
  return spec;
}

void BM_SolveMinNorm(benchmark::State& state) {
  const auto spec = alternating(int(state.range(0)));
  signal::SolveOptions opt;
  opt.precision = state.range(1) ? signal::Precision::Extended : signal::Precision::Machine;
  for (auto _ : state) benchmark::DoNotOptimize(signal::solve_min_norm(spec, opt));
}
BENCHMARK(BM_SolveMinNorm)->Args({5, 0})->Args({5, 1})->Args({10, 0})->Args({10, 1});

void BM_PartialFourier(benchmark::State& state) {
  const auto f = signal::solve_min_norm(alternating(5));
  const auto grid = TimeGrid::uniform(-40.0, 40.0, 0.05);
  for (auto _ : state) benchmark::DoNotOptimize(response::partial_fourier(f, pi, grid, 1e-9));
}
BENCHMARK(BM_PartialFourier)->Unit(benchmark::kMillisecond);

void BM_ClosedFormCoefficients(benchmark::State& state) {
  const auto f = signal::solve_min_norm(alternating(5)).scaled(0.01);
  const auto grid = TimeGrid::uniform(-20.0, 20.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(harmonic::closed_form_coefficients(f, pi, grid));
}
BENCHMARK(BM_ClosedFormCoefficients)->Unit(benchmark::kMillisecond);

void BM_Diagonalize(benchmark::State& state) {
  const anharmonic::AnharmonicSpec spec{1.0, 1.0, std::size_t(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(anharmonic::diagonalize(spec));
}
BENCHMARK(BM_Diagonalize)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_DispersiveGreen(benchmark::State& state) {
  const auto roots = dispersive::solve_dispersion(1.0, 10.0);
  const signal::SincExpansion J(0.6, {-1.0, 0.0, 1.5}, {0.4, 1.0, -0.3});
  const auto grid = TimeGrid::uniform(-30.0, 60.0, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(dispersive::driven_response_green(roots, J, grid));
}
BENCHMARK(BM_DispersiveGreen)->Unit(benchmark::kMillisecond);

void BM_ModeIntegration(benchmark::State& state) {
  const auto p = parametric::FrequencyProfile::modulated(1.0, 0.05, 2.0, 60.0);
  const auto [lo, hi] = p.static_bounds();
  parametric::ModeOptions opt;
  opt.samples = 2;
  for (auto _ : state) benchmark::DoNotOptimize(parametric::integrate_mode(p, lo, hi, opt));
}
BENCHMARK(BM_ModeIntegration)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
