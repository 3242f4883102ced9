#include <benchmark/benchmark.h>

#include <irh/disorder.hpp>
#include <irh/oracle.hpp>
#include <irh/phase.hpp>
#include <irh/pressure.hpp>
#include <irh/singlesite.hpp>

namespace {

void BM_log_trace(benchmark::State& state) {
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(irh::log_trace(2.0, 0.5, 1.0, 0.3, n_max));
}
BENCHMARK(BM_log_trace)->Arg(16)->Arg(64)->Arg(256);

void BM_variational_pressure(benchmark::State& state) {
  const auto spec = irh::DisorderSpec::bernoulli(0.5, 2.0);
  const irh::ModelParams params{4.0, 1.5, irh::Interaction::finite(1.0)};
  for (auto _ : state)
    benchmark::DoNotOptimize(irh::variational_pressure(params, spec));
}
BENCHMARK(BM_variational_pressure);

void BM_critical_beta(benchmark::State& state) {
  const auto spec = irh::DisorderSpec::bernoulli(0.5, 1.9);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        irh::critical_beta(0.5, irh::Interaction::hard_core(), spec));
}
BENCHMARK(BM_critical_beta);

void BM_critical_beta_uniform(benchmark::State& state) {
  const auto spec = irh::DisorderSpec::uniform(2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        irh::critical_beta(0.5, irh::Interaction::hard_core(), spec));
}
BENCHMARK(BM_critical_beta_uniform);

void BM_exact_pressure(benchmark::State& state) {
  const int V = static_cast<int>(state.range(0));
  const auto cfg = irh::LatticeRealization::sample(
      V, 3, 1.0, 0.5, 1.0, irh::DisorderSpec::bernoulli(0.5, 2.0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(irh::exact_pressure(cfg));
}
BENCHMARK(BM_exact_pressure)->Arg(2)->Arg(3)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
