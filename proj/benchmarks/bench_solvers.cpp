#include <benchmark/benchmark.h>

#include "hklab/env.hpp"
#include "hklab/gasket.hpp"
#include "hklab/iic.hpp"
#include "hklab/kernel.hpp"
#include "hklab/spectral.hpp"
#include "hklab/ust.hpp"

using namespace hklab;

static void BM_BuildGasket(benchmark::State& state) {
    const int level = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_gasket(constant_gasket_plan(2, level)));
    state.SetLabel("SG(2) level " + std::to_string(level));
}
BENCHMARK(BM_BuildGasket)->Arg(4)->Arg(6)->Arg(8);

static void BM_DiscreteKernel(benchmark::State& state) {
    const WeightedGraph g =
        build_gasket(constant_gasket_plan(2, static_cast<int>(state.range(0))));
    DiscreteOptions opt;
    opt.report_steps = {64};
    for (auto _ : state)
        benchmark::DoNotOptimize(srw_kernel_discrete(g, g.root, g.root, 64, opt));
    state.SetItemsProcessed(state.iterations() * 64 * 2 * g.edge_count());
}
BENCHMARK(BM_DiscreteKernel)->Arg(6)->Arg(7)->Arg(8);

static void BM_Uniformization(benchmark::State& state) {
    const WeightedGraph g = build_gasket(constant_gasket_plan(2, 5));
    for (auto _ : state)
        benchmark::DoNotOptimize(ctmc_kernel(g, g.root, g.root, {64.0}, 1e-10));
}
BENCHMARK(BM_Uniformization);

static void BM_BtmSolve(benchmark::State& state) {
    const double t_max = static_cast<double>(state.range(0));
    const std::int64_t cap = 16L * btm_initial_window(2.0, t_max);
    const TrapEnvironment env = sample_traps(2.0, {-cap, cap}, 1);
    const auto grid = dyadic_time_grid(1.0, t_max, 4);
    for (auto _ : state) benchmark::DoNotOptimize(btm_kernel(env, grid, 1e-4));
}
BENCHMARK(BM_BtmSolve)->Arg(1000)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_WilsonUst(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(wilson_ust(n, ++seed));
    state.SetLabel("box N=" + std::to_string(n));
}
BENCHMARK(BM_WilsonUst)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_IicBuild(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(build_iic(2, depth, ++seed));
}
BENCHMARK(BM_IicBuild)->Arg(64)->Arg(256);

static void BM_DenseSpectrum(benchmark::State& state) {
    const WeightedGraph g =
        build_gasket(constant_gasket_plan(2, static_cast<int>(state.range(0))));
    for (auto _ : state)
        benchmark::DoNotOptimize(laplacian_spectrum(g, BoundaryCondition::Neumann));
    state.SetLabel(std::to_string(g.vertex_count()) + " vertices");
}
BENCHMARK(BM_DenseSpectrum)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_InertiaCount(benchmark::State& state) {
    const WeightedGraph g = make_grid(static_cast<int>(state.range(0)),
                                      static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            eigenvalue_count_below(g, BoundaryCondition::Dirichlet, 0.25));
    state.SetLabel(std::to_string(g.vertex_count()) + " vertices");
}
BENCHMARK(BM_InertiaCount)->Arg(60)->Arg(120)->Arg(222)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
