// Serial vs OpenMP-parallel kernels. The benchmark argument is 0 for serial, 1 for parallel.

#include <benchmark/benchmark.h>

#include "coend/analyzer.hpp"
#include "coend/encoding.hpp"
#include "coend/relational.hpp"
#include "coend/tensor.hpp"
#include "coend/unique_tau.hpp"

using namespace coend;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_HomEnum(benchmark::State& state) {
  const auto a = one_in_three_structure();
  const auto a4 = power(a, 4);
  for (auto _ : state) benchmark::DoNotOptimize(hom_enum(a4, a, {.cap = 1u << 20, .execution = mode(state)}));
}

void BM_VerifyTensorLemmas(benchmark::State& state) {
  const auto t = Tensor::compute(3, power_set_functor(Tensor::required_bound(3) + 2));
  for (auto _ : state) benchmark::DoNotOptimize(verify_tensor_lemmas(t, {3, mode(state)}));
}

void BM_NatTransEnum(benchmark::State& state) {
  const auto p = one_in_three_presheaf();
  const auto p3 = power(p, 3);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_natural_transformations(p3, p, {.execution = mode(state)}));
}

void BM_Analyzer(benchmark::State& state) {
  const auto e = build_presheaf_encoding(nat_order_structure(), 3);
  const auto f = builtin_functor("rep:2", 4);
  TensorOracle oracle(7);
  AnalyzerOptions o;
  o.n = 3;
  o.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_morphism(oracle, e, f, o));
}

}  // namespace

BENCHMARK(BM_HomEnum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyTensorLemmas)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NatTransEnum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Analyzer)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
