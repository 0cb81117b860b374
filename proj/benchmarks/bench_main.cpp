#include "xkerr/entanglement.hpp"
#include "xkerr/state.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace xkerr;

namespace {

HermitianMatrix random_hermitian(Index n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return HermitianMatrix::trusted((m + m.adjoint()) / 2.0);
}

void BM_TraceNorm(benchmark::State& state) {
  const auto m = random_hermitian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TraceNorm)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNCubed);

void BM_BuildFrame(benchmark::State& state) {
  const auto p = SystemParams::symmetric(static_cast<double>(state.range(0)), 450.0, 0.0003, 0.1);
  const auto plan = plan_truncation(p);
  for (auto _ : state) benchmark::DoNotOptimize(build_frame(p, plan));
}
BENCHMARK(BM_BuildFrame)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

SystemParams assembly_params(Index alpha) {
  return SystemParams::symmetric(static_cast<double>(alpha), 50.0, 0.02, 0.2);
}

void BM_AssembleGemm(benchmark::State& state) {
  const auto p = assembly_params(state.range(0));
  const auto plan = plan_truncation(p);
  const auto frame = std::make_shared<const CoherentFrame>(build_frame(p, plan));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_lossy_rho(p, plan, frame));
}
BENCHMARK(BM_AssembleGemm)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_AssembleDirect(benchmark::State& state) {
  const auto p = assembly_params(state.range(0));
  const auto plan = plan_truncation(p);
  const auto frame = std::make_shared<const CoherentFrame>(build_frame(p, plan));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_lossy_rho_direct(p, plan, frame));
}
BENCHMARK(BM_AssembleDirect)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_LogNegativity(benchmark::State& state) {
  const auto rho = build_state(assembly_params(state.range(0)));
  state.counters["dim"] = static_cast<double>(rho.dim());
  for (auto _ : state) benchmark::DoNotOptimize(log_negativity(rho));
}
BENCHMARK(BM_LogNegativity)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
