#include <benchmark/benchmark.h>

#include "rwam/covering.hpp"
#include "rwam/function_space.hpp"
#include "rwam/kernel.hpp"
#include "rwam/meshgen.hpp"
#include "rwam/verify.hpp"

using namespace rwam;

static void BM_KernelProfile(benchmark::State& state) {
  auto s = tensor_chebyshev_space(Box::symmetric(2), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_profile(*s).R_mu);
}
BENCHMARK(BM_KernelProfile)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_InducedSampler(benchmark::State& state) {
  auto s = tensor_chebyshev_space(Box::symmetric(2), 5);
  InducedSampler sampler(s);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(static_cast<std::size_t>(state.range(0)), ++seed).points.data());
}
BENCHMARK(BM_InducedSampler)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_SupRatio(benchmark::State& state) {
  auto s = tensor_chebyshev_space(Box::symmetric(2), 5);
  MuVOptions opt;
  opt.count_rule = "wls";
  const Mesh m = build_muV_mesh(s, 1, opt);
  const int k = static_cast<int>(state.range(0));
  const PointSet eval = snake_points(TensorGrid(s->domain(), {k, k}));
  for (auto _ : state) benchmark::DoNotOptimize(sup_ratio_constant(*s, m.points, eval, 61.0).C_hat);
}
BENCHMARK(BM_SupRatio)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_GreedyCover(benchmark::State& state) {
  auto s = tensor_chebyshev_space(Box::symmetric(1), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cover_space(*s, 3.0).size());
}
BENCHMARK(BM_GreedyCover)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
