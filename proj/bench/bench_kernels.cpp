// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include "chemostat/batch.hpp"
#include "chemostat/certificate.hpp"
#include "chemostat/compact_set.hpp"
#include "chemostat/scenario.hpp"

namespace {

using namespace chemostat;

double scan_weight() {
  const ModelParams p(10.0, 0.5);
  const auto cert = make_certificate(p);
  return cert.kappa / (cert.d_o - cert.ubar);
}

CompactGrid grid_of(benchmark::State& state) {
  CompactGrid g;
  g.n_xi = g.n_z = static_cast<std::size_t>(state.range(0));
  return g;
}

void BM_CompactScanSerial(benchmark::State& state) {
  const double w = scan_weight();
  const auto g = grid_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(scan_compact_set_serial(w, g));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_CompactScanParallel(benchmark::State& state) {
  const double w = scan_weight();
  const auto g = grid_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(scan_compact_set_parallel(w, g));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

BENCHMARK(BM_CompactScanSerial)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CompactScanParallel)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);

JobResult short_run(std::size_t i) {
  Scenario sc;
  sc.params = ModelParams(10.0, 0.5);
  sc.initial = {0.5 + 0.01 * static_cast<double>(i), 1.5};
  sc.disturbance.kind = DisturbanceKind::random;
  sc.disturbance.ubar = disturbance_cap(sc.params) / 2.0;
  sc.disturbance.seed = i;
  sc.integrator.tf = 5.0;
  const auto res = run_scenario(sc);
  return {true, {}, {{"x_end", res.trajectory.samples.back().x}}};
}

void BM_BatchSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(n, short_run));
}

void BM_BatchParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_parallel(n, short_run));
}

BENCHMARK(BM_BatchSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchParallel)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
