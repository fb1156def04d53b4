#include <benchmark/benchmark.h>

#include "qfluct/calibration.hpp"
#include "qfluct/kernels.hpp"
#include "qfluct/rng.hpp"
#include "qfluct/sampler.hpp"
#include "qfluct/smearing.hpp"
#include "qfluct/sweep.hpp"
#include "qfluct/walker.hpp"

namespace {

void BM_PhiloxGaussian(benchmark::State& state) {
  qfluct::RngStream rng(42, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.gaussian());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxGaussian);

void BM_Lag1Estimate(benchmark::State& state) {
  const qfluct::ChainConfig cfg{0.5, 1.0, qfluct::SamplerMode::ChainRaw};
  const auto steps = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(qfluct::estimate_lag1(cfg, steps, 7, stream++));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Lag1Estimate)->Arg(20000);

// One full sweep at the figure protocol, single threaded.
void BM_SweepQuartic(benchmark::State& state) {
  const auto kernel = qfluct::CorrelationKernel::unit_quartic();
  const auto model = qfluct::CalibrationModel::exact();
  qfluct::SweepConfig cfg;
  cfg.n_points = static_cast<std::size_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(qfluct::correlation_sweep(kernel, model, cfg));
}
BENCHMARK(BM_SweepQuartic)->Arg(801)->Unit(benchmark::kMillisecond);

void BM_SmearedQuadrature(benchmark::State& state) {
  qfluct::SmearingSpec spec;
  spec.abs_tol = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qfluct::smeared_correlation_quadrature(1.0, spec));
}
BENCHMARK(BM_SmearedQuadrature)->Arg(1000000)->Arg(100000000)->Unit(benchmark::kMillisecond);

void BM_WalkEnsemble(benchmark::State& state) {
  qfluct::WalkConfig cfg;
  cfg.f = 0.5;
  cfg.n_walkers = static_cast<std::size_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(qfluct::run_walk_ensemble(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_WalkEnsemble)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_KernelZeroCrossings(benchmark::State& state) {
  const auto kernel = qfluct::CorrelationKernel::unit_quartic();
  for (auto _ : state) benchmark::DoNotOptimize(qfluct::zero_crossings(kernel, 0.0, 8.0));
}
BENCHMARK(BM_KernelZeroCrossings);

}  // namespace

BENCHMARK_MAIN();
