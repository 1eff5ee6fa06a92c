#include <benchmark/benchmark.h>

#include <numbers>

#include "zenosplit/analysis.hpp"
#include "zenosplit/special.hpp"

namespace {

void BM_BesselJ(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  double x = 0.0314;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zenosplit::special::bessel_j(order, x));
  }
}
BENCHMARK(BM_BesselJ)->Arg(0)->Arg(1)->Arg(20)->Arg(200);

void BM_GratingMatrix(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(zenosplit::sinusoidal_grating_matrix(0.02 * std::numbers::pi, m));
  }
}
BENCHMARK(BM_GratingMatrix)->Arg(10)->Arg(100);

void BM_Propagate(benchmark::State& state) {
  zenosplit::ScenarioConfig config;
  config.grating.phase_amplitude = 0.02 * std::numbers::pi;
  config.truncation = 100;
  config.max_passes = static_cast<int>(state.range(1));
  if (state.range(0) != 0) config.aperture = zenosplit::ApertureSpec{{0, 1}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(zenosplit::propagate(config));
  }
  state.SetItemsProcessed(state.iterations() * config.max_passes);
}
BENCHMARK(BM_Propagate)->Args({0, 400})->Args({1, 400})->Unit(benchmark::kMillisecond);

void BM_LossCurve(benchmark::State& state) {
  const std::vector<double> amplitudes{0.04 * std::numbers::pi, 0.02 * std::numbers::pi,
                                       0.01 * std::numbers::pi};
  for (auto _ : state) {
    benchmark::DoNotOptimize(zenosplit::loss_curve(amplitudes, zenosplit::ApertureSpec{{0, 1}}));
  }
}
BENCHMARK(BM_LossCurve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
