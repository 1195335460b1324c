// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS to vary the
// thread count; both variants produce bit-identical results.

#include <benchmark/benchmark.h>

#include <vector>

#include "spdcfc/core_model.hpp"
#include "spdcfc/oracle.hpp"
#include "spdcfc/sweep_opt.hpp"

namespace {

using spdcfc::Execution;

spdcfc::ExperimentConfig baseline_config(double length_um) {
  return spdcfc::ExperimentConfig{
      .crystal_length_um = length_um,
      .pump_waist_um = 53.0,
      .fiber_mode_radius_um = 1.48,
      .inverse_magnification = 49.0,
      .walkoffs = {0.07631, 0.07243, 0.036215},
  };
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_OverlapTerms(benchmark::State& state) {
  const auto cfg = baseline_config(3000.0);
  spdcfc::QuadratureSpec q;
  q.n_tau = static_cast<int>(state.range(1));
  q.n_trans = 3 * q.n_tau / 2;
  const Execution exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdcfc::overlap_terms(cfg, q, exec));
  }
}
BENCHMARK(BM_OverlapTerms)->ArgsProduct({{0, 1}, {64, 256, 1024}})->Unit(benchmark::kMicrosecond);

void BM_EfficiencyCurve(benchmark::State& state) {
  spdcfc::SweepSpec spec;
  spec.fixed = baseline_config(1.0);
  for (int i = 1; i <= static_cast<int>(state.range(1)); ++i) spec.l_grid_um.push_back(10.0 * i);
  spec.mu_values = spdcfc::kDefaultMuValues;
  const Execution exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdcfc::efficiency_curve(spec, exec));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(spec.l_grid_um.size() * spec.mu_values.size()));
}
BENCHMARK(BM_EfficiencyCurve)->ArgsProduct({{0, 1}, {500, 5000}})->Unit(benchmark::kMicrosecond);

void BM_CeilingScan(benchmark::State& state) {
  std::vector<double> lengths;
  for (int i = 1; i <= 50; ++i) lengths.push_back(100.0 * i);
  const Execution exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdcfc::ceiling_scan(53.0, {0.07631, 0.07243, 0.036215}, lengths, exec));
  }
}
BENCHMARK(BM_CeilingScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
