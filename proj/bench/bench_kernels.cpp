// Serial reference paths against their OpenMP counterparts. Thread count
// follows OMP_NUM_THREADS or MECLAB_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "meclab/kernels.hpp"
#include "meclab/ran_analytic.hpp"
#include "meclab/simulator.hpp"

namespace {

using namespace meclab;

struct Field {
  Realization real;
  std::vector<double> weight;
  std::vector<int> targets;
  std::vector<double> out;
};

Field make_field(double window_factor) {
  const NetworkConfig cfg;
  Field f;
  f.real = sample_realization(cfg, window_factor * derive_basics(cfg).zone_radius, 7);
  f.weight.assign(f.real.fading.begin(), f.real.fading.end());
  f.targets.resize(f.real.aps.size());
  for (std::size_t i = 0; i < f.targets.size(); ++i) f.targets[i] = static_cast<int>(i);
  f.out.resize(f.targets.size());
  return f;
}

template <bool Parallel>
void BM_Interference(benchmark::State& state) {
  Field f = make_field(static_cast<double>(state.range(0)));
  const NetworkConfig cfg;
  const InterferenceField field{f.real.aps, f.real.mobiles, f.weight, f.real.association, cfg.alpha,
                                f.real.window_side};
  for (auto _ : state) {
    if constexpr (Parallel) interference_at_aps_parallel(field, f.targets, f.out);
    else interference_at_aps_serial(field, f.targets, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.counters["pairs"] = static_cast<double>(f.real.aps.size() * f.real.mobiles.size());
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.real.aps.size() * f.real.mobiles.size()));
}

template <bool Parallel>
void BM_MonteCarlo(benchmark::State& state) {
  MonteCarloJob job;
  job.g_star = static_cast<double>(solve_spreading(job.cfg).g_star);
  job.opts.run_async = true;
  job.opts.run_sync = true;
  job.realizations = state.range(0);
  job.seed = 1;
  for (auto _ : state) {
    auto runs = Parallel ? run_monte_carlo_parallel(job) : run_monte_carlo_serial(job);
    benchmark::DoNotOptimize(runs.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_TEMPLATE(BM_Interference, false)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK_TEMPLATE(BM_Interference, true)->Arg(20)->Arg(40)->Unit(benchmark::kMicrosecond);
BENCHMARK_TEMPLATE(BM_MonteCarlo, false)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK_TEMPLATE(BM_MonteCarlo, true)->Arg(16)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  apply_thread_limit_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
