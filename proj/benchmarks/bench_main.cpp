#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <random>

#include "nlpg/advection.hpp"
#include "nlpg/laplace.hpp"
#include "nlpg/lp_geometry.hpp"
#include "nlpg/quadrature.hpp"
#include "nlpg/smoothed_lp.hpp"

using namespace nlpg;

namespace {

void BM_DualityMap(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n01;
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    for (double& x : v) x = n01(rng);
    const LpVector lv(v, 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(duality_map_lp(lv));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DualityMap)->Arg(16)->Arg(1024)->Arg(65536);

void BM_SmoothedLp(benchmark::State& state) {
    const Eigen::Index n = state.range(0);
    const Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(n, -1.0, 2.0);
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    for (auto _ : state) benchmark::DoNotOptimize(eval_smoothed_lp(z, w, 3.0, 1e-6));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SmoothedLp)->Arg(1024)->Arg(65536);

// Graded quadrature of an integrable endpoint singularity.
void BM_SingularQuadrature(benchmark::State& state) {
    QuadratureRule rule;
    rule.with_singular(0.0, static_cast<int>(state.range(0)));
    const Mesh1D mesh = make_uniform_mesh(0, 1, 16);
    for (auto _ : state)
        benchmark::DoNotOptimize(lp_norm([](double x) { return std::pow(x, -1.0 / 3.0); }, mesh, 2.0, rule));
}
BENCHMARK(BM_SingularQuadrature)->Arg(8)->Arg(24);

// Full mixed solve for the smooth Laplace problem, P1 x P2, p = 3/2.
void BM_SolveMixedLaplace(benchmark::State& state) {
    const LaplaceData data = LaplaceData::smooth_exp(1.5);
    for (auto _ : state) benchmark::DoNotOptimize(laplace_solve_level(data, 1, 2, static_cast<std::size_t>(state.range(0))));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveMixedLaplace)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond)->Complexity();

// Cell-average advection solve with the local ideal test basis.
void BM_CellAverage(benchmark::State& state) {
    const AdvectionData data = AdvectionData::shifted_sign(std::sqrt(0.5));
    const Mesh1D mesh = make_uniform_mesh(0, 1, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(cell_average_solve(data, mesh, 1.5));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CellAverage)->RangeMultiplier(8)->Range(64, 4096)->Unit(benchmark::kMillisecond)->Complexity();

void BM_AoConstant(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(compute_c_ao(1.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AoConstant)->Arg(1000)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
