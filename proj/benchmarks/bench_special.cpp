#include <benchmark/benchmark.h>

#include "ltk/bessel.hpp"

namespace {

void BM_bessel_i_series(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::bessel_i(0.25, x));
    x = x < 45.0 ? x + 0.01 : 0.5;
  }
}
BENCHMARK(BM_bessel_i_series);

void BM_bessel_i_asymptotic(benchmark::State& state) {
  double x = 60.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::bessel_i_scaled(0.25, x));
    x = x < 600.0 ? x + 0.1 : 60.0;
  }
}
BENCHMARK(BM_bessel_i_asymptotic);

void BM_bessel_k(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::bessel_k_scaled(0.25, x));
    x = x < 45.0 ? x + 0.01 : 0.5;
  }
}
BENCHMARK(BM_bessel_k);

void BM_psi_p(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::psi_p(0.25, x));
    x = x < 20.0 ? x + 0.01 : 0.1;
  }
}
BENCHMARK(BM_psi_p);

}  // namespace

BENCHMARK_MAIN();
