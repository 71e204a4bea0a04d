// Serial vs OpenMP particle kernels and the Monte Carlo driver.
#include <benchmark/benchmark.h>

#include "circfilt/experiments.hpp"
#include "circfilt/particle.hpp"

using namespace circfilt;

namespace {

ParticleEnsemble ensemble(std::size_t n) {
  CounterRng rng(1);
  return pf_init(n, PfInit::von_mises(0.0, 2.0), rng);
}

template <Execution E>
void BM_PfStep(benchmark::State& state) {
  auto ens = ensemble(static_cast<std::size_t>(state.range(0)));
  CircularModelParams p;
  p.kappa_phi = 1.0;
  p.kappa_u = 1.0;
  p.kappa_z = 10.0;
  CounterRng rng(2);
  for (auto _ : state) {
    pf_step(ens, 0.01, Angle(0.3), p, rng, E);
    benchmark::DoNotOptimize(ens.angles.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution E>
void BM_PfEstimate(benchmark::State& state) {
  const auto ens = ensemble(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pf_estimate(ens, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_MonteCarlo(benchmark::State& state) {
  ExperimentConfig c;
  c.circular.kappa_phi = 1.0;
  c.circular.kappa_u = 1.0;
  c.circular.kappa_z = 10.0;
  c.T = 2.0;
  c.runs = 32;
  c.jobs = static_cast<int>(state.range(0));
  c.record_stride = 10;
  c.filters = {parse_filter_spec("circkf"), parse_filter_spec("pf(1000)")};
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(c));
}

}  // namespace

BENCHMARK(BM_PfStep<Execution::kSerial>)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_PfStep<Execution::kParallel>)->Arg(1000)->Arg(10000)->Arg(100000);
BENCHMARK(BM_PfEstimate<Execution::kSerial>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_PfEstimate<Execution::kParallel>)->Arg(10000)->Arg(100000);
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
