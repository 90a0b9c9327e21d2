// Serial reference vs OpenMP path for the hot kernels.

#include "dnls/kernels.hpp"
#include "dnls/manifold.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

using namespace dnls;

namespace {

std::vector<double> random_series(int order, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> c(kernels::tri_size(order));
    for (auto& x : c) x = u(rng);
    return c;
}

// All degrees of a full product up to order N.
void BM_ProductDegree(benchmark::State& state, Execution exec) {
    const int N = static_cast<int>(state.range(0));
    const auto x = random_series(N, 1), y = random_series(N, 2);
    std::vector<double> out(kernels::tri_size(N));
    for (auto _ : state) {
        for (int d = 0; d <= N; ++d) kernels::product_degree(x, y, d, 0, d, out, exec);
        benchmark::DoNotOptimize(out.data());
        benchmark::ClobberMemory();
    }
}

void BM_GridMax(benchmark::State& state, Execution exec) {
    const ModelParams p{0.0004, -0.125};
    const ManifoldSeries Ps = compute_manifold(p, Branch::Stable);
    const kernels::Grid grid{1.0, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(conjugacy_residual(Ps, grid, exec));
}

void BM_ComputeManifold(benchmark::State& state, Execution exec) {
    const ModelParams p{0.0004, -0.125};
    ManifoldOptions o;
    o.order = static_cast<int>(state.range(0));
    o.exec = exec;
    for (auto _ : state) benchmark::DoNotOptimize(compute_manifold(p, Branch::Stable, o));
}

}  // namespace

BENCHMARK_CAPTURE(BM_ProductDegree, serial, Execution::Serial)->Arg(40)->Arg(80)->Arg(160);
BENCHMARK_CAPTURE(BM_ProductDegree, openmp, Execution::Parallel)->Arg(40)->Arg(80)->Arg(160);
BENCHMARK_CAPTURE(BM_GridMax, serial, Execution::Serial)->Arg(41)->Arg(101);
BENCHMARK_CAPTURE(BM_GridMax, openmp, Execution::Parallel)->Arg(41)->Arg(101);
BENCHMARK_CAPTURE(BM_ComputeManifold, serial, Execution::Serial)->Arg(40)->Arg(80);
BENCHMARK_CAPTURE(BM_ComputeManifold, openmp, Execution::Parallel)->Arg(40)->Arg(80);

BENCHMARK_MAIN();
