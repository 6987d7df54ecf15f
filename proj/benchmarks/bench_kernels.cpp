#include <benchmark/benchmark.h>

#include "msqrt/linalg.hpp"
#include "msqrt/problems.hpp"
#include "msqrt/solvers.hpp"

namespace {

using namespace msqrt;

void BM_Multiply(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const SymMatrix a = gen_spd_loguniform(n, 2.0, 1).a;
  for (auto _ : state) benchmark::DoNotOptimize(multiply(a.matrix(), a.matrix()));
}
BENCHMARK(BM_Multiply)->Arg(50)->Arg(100)->Arg(200);

void BM_Cholesky(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const SymMatrix a = gen_spd_loguniform(n, 2.0, 2).a;
  for (auto _ : state) benchmark::DoNotOptimize(cholesky(a));
}
BENCHMARK(BM_Cholesky)->Arg(50)->Arg(100)->Arg(200);

void BM_EigSym(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const SymMatrix a = gen_spd_loguniform(n, 2.0, 3).a;
  for (auto _ : state) benchmark::DoNotOptimize(eig_sym(a));
}
BENCHMARK(BM_EigSym)->Arg(20)->Arg(50)->Arg(100);

void BM_Fpm1Step(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const SymMatrix a = gen_spd_loguniform(n, 2.0, 4).a;
  const SymMatrix x = initial_iterate(a, std::nullopt);
  const double mu = compute_mu(a, MuPolicy::auto_fpm1(0.5));
  for (auto _ : state) benchmark::DoNotOptimize(fpm1_step(a, x, mu));
}
BENCHMARK(BM_Fpm1Step)->Arg(50)->Arg(100)->Arg(200);

void BM_SraStep(benchmark::State& state) {
  const std::size_t n = state.range(0);
  const SymMatrix a = gen_spd_loguniform(n, 2.0, 5).a;
  const SymMatrix x = initial_iterate(a, std::nullopt);
  for (auto _ : state) benchmark::DoNotOptimize(sra_step(a, x));
}
BENCHMARK(BM_SraStep)->Arg(50)->Arg(100)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
