#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "odeof/entanglement.hpp"
#include "odeof/odfam.hpp"
#include "odeof/oracle.hpp"
#include "odeof/states.hpp"

using namespace odeof;

static void BM_EigHermitian(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const BipartiteDensity rho = random_density(BipartiteDims(d, d), d * d, 7);
  for (auto _ : state) benchmark::DoNotOptimize(eig_hermitian(rho.matrix()));
}
BENCHMARK(BM_EigHermitian)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

static void BM_WoottersEof(benchmark::State& state) {
  const BipartiteDensity rho = random_density(BipartiteDims(2, 2), 4, 11);
  for (auto _ : state) benchmark::DoNotOptimize(wootters_eof(rho));
}
BENCHMARK(BM_WoottersEof);

static void BM_CoeffMatrix(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(coeff_matrix(d, 2));
}
BENCHMARK(BM_CoeffMatrix)->Arg(3)->Arg(5);

static void BM_OdIsotropic(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(od_isotropic(d, 0.95, 2));
}
BENCHMARK(BM_OdIsotropic)->Arg(3)->Arg(5);

static void BM_OdWerner(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(od_werner(d, -0.5));
}
BENCHMARK(BM_OdWerner)->Arg(3)->Arg(5)->Arg(8);

static void BM_Bruteforce(benchmark::State& state) {
  const BipartiteDensity rho = random_density(BipartiteDims(2, 2), static_cast<int>(state.range(0)), 3);
  OracleConfig cfg;
  cfg.restarts = 4;
  cfg.samples = 20;
  for (auto _ : state) benchmark::DoNotOptimize(eof_bruteforce(rho, cfg));
}
BENCHMARK(BM_Bruteforce)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
