#include <benchmark/benchmark.h>

#include "ltk/bridge.hpp"

namespace {

const ltk::PhysicalParams params;

void BM_sample_bridge(benchmark::State& state) {
  ltk::MCConfig cfg{1, static_cast<int>(state.range(0)), 7u, 1.0};
  long i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::sample_bridge(params, 0.0, 1.0, cfg, i++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sample_bridge)->Arg(1024)->Arg(4096);

void BM_feynman_kac(benchmark::State& state) {
  ltk::MCConfig cfg{state.range(0), 1024, 7u, 1.0};
  const ltk::Potential pot = ltk::HarmonicPotential{1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::feynman_kac(pot, params, {0.0, 0.0, 1.0}, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1024);
}
BENCHMARK(BM_feynman_kac)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_local_time_profile(benchmark::State& state) {
  ltk::MCConfig cfg{1, 4096, 7u, 1.0};
  const auto path = ltk::sample_bridge(params, 0.0, 0.0, cfg, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::local_time_profile(path, 0.02));
  }
}
BENCHMARK(BM_local_time_profile);

void BM_exact_local_time(benchmark::State& state) {
  ltk::MCConfig cfg{256, 4096, 7u, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ltk::sample_local_times(params, 1.0, 0.0, 0.0, 0.0, cfg));
  }
  state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_exact_local_time)->Unit(benchmark::kMillisecond);

}  // namespace
