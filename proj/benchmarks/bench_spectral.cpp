#include <benchmark/benchmark.h>

#include "ltk/laplace.hpp"
#include "ltk/spectral.hpp"
#include "ltk/sturm.hpp"

namespace {

const ltk::PhysicalParams params;
const ltk::Potential harmonic = ltk::HarmonicPotential{1.0};

void BM_eigendecompose(benchmark::State& state) {
  const ltk::GridSpec grid{-12.0, 12.0, static_cast<int>(state.range(0))};
  const auto H = ltk::discretize(harmonic, grid, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::eigendecompose(H, 32));
  }
}
BENCHMARK(BM_eigendecompose)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_heat_propagate(benchmark::State& state) {
  const ltk::GridSpec grid{-12.0, 12.0, 1201};
  const auto H = ltk::discretize(harmonic, grid, params);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::heat_propagate(H, 0.0, 1.0, state.range(0)));
  }
}
BENCHMARK(BM_heat_propagate)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_green_function(benchmark::State& state) {
  const ltk::GridSpec grid{-12.0, 12.0, 2401};
  double E = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::green_function(harmonic, params, E, 0.0, 1.0, grid));
    E += 0.001;
  }
}
BENCHMARK(BM_green_function);

void BM_sturm_laplace_point(benchmark::State& state) {
  const ltk::GridSpec grid{-12.0, 12.0, 1201};
  for (auto _ : state) {
    ltk::LaplaceEvaluable f{
        [&](double E) { return ltk::green_function(harmonic, params, E, 0.0, 1.0, grid).value; },
        0.0};
    benchmark::DoNotOptimize(ltk::gaver_stehfest_invert(f, 1.0, 14));
  }
}
BENCHMARK(BM_sturm_laplace_point)->Unit(benchmark::kMillisecond);

}  // namespace
