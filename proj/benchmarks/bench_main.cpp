#include <benchmark/benchmark.h>

#include "jacobi/decay.hpp"
#include "jacobi/eigenfunctions.hpp"
#include "jacobi/lattice.hpp"
#include "jacobi/propagator.hpp"
#include "jacobi/spectral.hpp"
#include "jacobi/specfun.hpp"

using namespace jacobi;

static void BM_ExpintTable(benchmark::State& state) {
  const int nmax = static_cast<int>(state.range(0));
  std::vector<cplx> out(static_cast<std::size_t>(nmax) + 1);
  for (auto _ : state) {
    specfun::generalized_expint_table(nmax, cplx(2.5, 0.5), out.data());
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ExpintTable)->Arg(10)->Arg(100);

static void BM_PsiResolvent(benchmark::State& state) {
  const int xmax = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(psi_resolvent(ComplexEnergy::off(cplx(-1.5, 0.5)), xmax));
}
BENCHMARK(BM_PsiResolvent)->Arg(30)->Arg(200);

static void BM_BoundState(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(bound_state_solve(1.0, 40));
}
BENCHMARK(BM_BoundState);

static void BM_KernelTable(benchmark::State& state) {
  const auto kind = state.range(0) == 0 ? OperatorKind::free : OperatorKind::perturbed;
  const std::vector<double> ts{1.0, 5.0, 10.0};
  for (auto _ : state) benchmark::DoNotOptimize(kernel_table(kind, 1.0, ts, 10, 10));
}
BENCHMARK(BM_KernelTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_OracleKernel(benchmark::State& state) {
  OperatorSpec spec;
  spec.kind = OperatorKind::perturbed;
  spec.q = 1.0;
  spec.N = static_cast<int>(state.range(0));
  OracleOptions opt;
  opt.adaptive = false;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_kernel({5.0}, spec, 10, opt));
}
BENCHMARK(BM_OracleKernel)->Arg(3200)->Arg(6400)->Unit(benchmark::kMillisecond);

static void BM_DecayCurve(benchmark::State& state) {
  DecayConfig c;
  c.xmax = 20;
  const auto ts = log_spaced(10.0, 1000.0, 8);
  for (auto _ : state) benchmark::DoNotOptimize(decay_curve(OperatorKind::free, 0.0, ts, KernelPart::full, c));
}
BENCHMARK(BM_DecayCurve)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
