#include <benchmark/benchmark.h>

#include <array>

#include "mixinv/kernels.hpp"
#include "mixinv/mixed_block.hpp"
#include "mixinv/random.hpp"
#include "mixinv/verify.hpp"

using namespace mixinv;

static void BM_MpInverse(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = gen_matrix(1, n, n - 1, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(mp_inverse(a));
}
BENCHMARK(BM_MpInverse)->Arg(4)->Arg(12)->Arg(48);

static void BM_UcInverse(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = gen_matrix(2, n, n - 1, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(uc_inverse(a));
}
BENCHMARK(BM_UcInverse)->Arg(4)->Arg(12)->Arg(48);

static void BM_Fcf(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix a = gen_matrix(3, n, n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(fcf(a));
}
BENCHMARK(BM_Fcf)->Arg(4)->Arg(8);

static void BM_TripleExplicit(benchmark::State& state) {
  const Index s = state.range(0);
  const std::array<Index, 3> sizes{s, s, s};
  const Block3 b = split3(gen_block_well_conditioned(4, sizes), s, s, s);
  for (auto _ : state)
    benchmark::DoNotOptimize(triple_block_explicit(b, GinvKind::MoorePenrose,
                                                   GinvKind::UnitConsistent,
                                                   GinvKind::MoorePenrose));
}
BENCHMARK(BM_TripleExplicit)->Arg(2)->Arg(4)->Arg(8);

static void BM_TripleRecursive(benchmark::State& state) {
  const Index s = state.range(0);
  const std::array<Index, 3> sizes{s, s, s};
  const Block3 b = split3(gen_block_well_conditioned(4, sizes), s, s, s);
  for (auto _ : state)
    benchmark::DoNotOptimize(triple_block_recursive(b, GinvKind::MoorePenrose,
                                                    GinvKind::UnitConsistent,
                                                    GinvKind::MoorePenrose));
}
BENCHMARK(BM_TripleRecursive)->Arg(2)->Arg(4)->Arg(8);

static void BM_Suite(benchmark::State& state) {
  SuiteConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(config));
}
BENCHMARK(BM_Suite)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
