#include <benchmark/benchmark.h>

#include <cmath>

#include "bandgap/bloch.hpp"
#include "bandgap/direct.hpp"
#include "bandgap/gelfand.hpp"

using namespace bandgap;

namespace {

PeriodicPotential mathieu() {
  return PeriodicPotential({cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
}

void bm_band_scan(benchmark::State& state) {
  const auto Q = mathieu();
  const auto grid = brillouin_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto bs = bloch::band_scan(Q, grid, 8, 32);
    benchmark::DoNotOptimize(bs.bands[0][0].energy);
  }
}
BENCHMARK(bm_band_scan)->Arg(32)->Arg(64)->Arg(128);

void bm_edge_analysis(benchmark::State& state) {
  const auto Q = mathieu();
  for (auto _ : state) {
    const auto edge = bloch::band_edge_analysis(Q, 1, 0.5, 32);
    benchmark::DoNotOptimize(edge.d2E);
  }
}
BENCHMARK(bm_edge_analysis);

void bm_count_below_constant(benchmark::State& state) {
  // constant background: counting cost is set by the core window, not L
  const double L = static_cast<double>(state.range(0));
  const auto q = [](double x) { return -0.5 * std::exp(-x * x); };
  const direct::TruncatedHamiltonian H(PeriodicPotential{}, q, 8.0, L, 0.005);
  for (auto _ : state) benchmark::DoNotOptimize(H.count_below(-0.05));
}
BENCHMARK(bm_count_below_constant)->Arg(100)->Arg(10000)->Arg(1000000);

void bm_count_below_periodic(benchmark::State& state) {
  const direct::TruncatedHamiltonian H(mathieu(), [](double) { return 0.0; }, 0.0,
                                       static_cast<double>(state.range(0)), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(H.count_below(2.0));
}
BENCHMARK(bm_count_below_periodic)->Arg(20)->Arg(100)->Arg(500);

void bm_gap_eigenvalue(benchmark::State& state) {
  const auto q = [](double x) { return -0.5 * std::exp(-x * x); };
  const direct::TruncatedHamiltonian H(PeriodicPotential{}, q, 8.0, 10000.0, 0.005);
  for (auto _ : state) {
    const auto E = H.gap_eigenvalue(-0.5, 0.0, 1e-9);
    benchmark::DoNotOptimize(E);
  }
}
BENCHMARK(bm_gap_eigenvalue);

void bm_gelfand_transform(benchmark::State& state) {
  const auto s = SampledFunction::sample(
      [](double x) { return cplx{std::exp(-x * x), 0.0}; }, 40.0, 1.0 / 64.0);
  for (auto _ : state) {
    const auto F = gelfand::transform(s, 64, -8, 8);
    benchmark::DoNotOptimize(F.coef(0, 0));
  }
}
BENCHMARK(bm_gelfand_transform);

}  // namespace

BENCHMARK_MAIN();
