#include <benchmark/benchmark.h>

#include <vector>

#include "mtsf/hermite.hpp"
#include "mtsf/kernels.hpp"
#include "mtsf/select.hpp"
#include "mtsf/simulate.hpp"

using namespace mtsf;

namespace {

const double kFrequency[] = {-1.0, 1.7320508075688772};

PointPattern pattern(double R) { return sample_poisson(1.0, Window({R, R}), RngSeed(1)); }

// Serial point-by-point evaluation of every T_i(k).
void BM_reference(benchmark::State& state) {
  const auto imax = static_cast<int>(state.range(0));
  const auto p = pattern(10.0);
  const auto basis = TaperBasis::hermite(2, imax, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(reference::linear_statistics(p, basis, kFrequency));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.size() * basis.size()));
}

// Blocked kernel, including the per-axis Hermite tables.
void BM_kernel(benchmark::State& state) {
  const auto imax = static_cast<int>(state.range(0));
  const auto p = pattern(10.0);
  const auto basis = TaperBasis::hermite(2, imax, 10.0);
  for (auto _ : state) {
    const auto tables = kernel::hermite_tables(p, basis.r(), imax);
    benchmark::DoNotOptimize(kernel::grid_statistics(p, tables, kFrequency));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.size() * basis.size()));
}

// Blocked kernel with tables and phases prepared, as inside cross-validation.
void BM_kernel_shared(benchmark::State& state) {
  const auto imax = static_cast<int>(state.range(0));
  const auto p = pattern(10.0);
  const auto basis = TaperBasis::hermite(2, imax, 10.0);
  const auto tables = kernel::hermite_tables(p, basis.r(), imax);
  const auto phase = kernel::phases(p, kFrequency);
  for (auto _ : state) benchmark::DoNotOptimize(kernel::grid_statistics(tables, phase));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(p.size() * basis.size()));
}

// Full criterion curve at one node with all 25 candidates.
void BM_cv_curve(benchmark::State& state) {
  const Window w({10.0, 10.0});
  const auto p = sample_neyman_scott(ThomasKernel{0.25}, 5.0, 0.2, w, RngSeed(2));
  CvConfig cfg;
  cfg.pilot_imax = 8;
  const double node[] = {-1.0, 1.7320508075688772};
  const auto pairs = build_pair_set(node, cfg);
  const auto table = cv_fourier_table(w, cfg, pairs);
  for (auto _ : state) benchmark::DoNotOptimize(cv_criterion_curve(p, cfg, pairs, table));
}

}  // namespace

BENCHMARK(BM_reference)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel)->Arg(4)->Arg(8)->Arg(16)->Arg(25)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_shared)->Arg(4)->Arg(8)->Arg(16)->Arg(25)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cv_curve)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
