// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bifuq/continuation.hpp"
#include "bifuq/eigen.hpp"
#include "bifuq/gpc.hpp"
#include "bifuq/sparse_grid.hpp"

using namespace bifuq;
using std::numbers::pi;

namespace {

std::vector<Marginal> box() { return {Marginal::uniform(-1, 1), Marginal::uniform(-pi / 2, pi / 2)}; }

void BM_EigSymTridiag(benchmark::State& state) {
    const auto t = assemble_laplacian(SpatialGrid(0.0, pi, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(eig_sym_tridiag(t));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigSymTridiag)->RangeMultiplier(2)->Range(25, 400)->Complexity();

void BM_TraceBranch(benchmark::State& state) {
    const SpatialGrid g(0.0, pi, static_cast<int>(state.range(0)));
    const auto field = RandomFieldModel::cosine(box()[0], box()[1]);
    const DiscreteSystem sys(g, field, {0.5, 0.7});
    const auto bif = bifurcation_points(g, field, sys.y(), 1)[0];
    const auto settings = ContinuationSettings::with_endpoint(5.0, 0.05);
    for (auto _ : state) benchmark::DoNotOptimize(trace_branch(sys, bif, settings));
}
BENCHMARK(BM_TraceBranch)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BuildSparseGrid(benchmark::State& state) {
    const auto marg = box();
    for (auto _ : state) benchmark::DoNotOptimize(build_sparse_grid(2, static_cast<int>(state.range(0)), marg));
}
BENCHMARK(BM_BuildSparseGrid)->DenseRange(3, 12, 3);

void BM_LagrangeToGpc(benchmark::State& state) {
    const auto marg = box();
    const auto sg = build_sparse_grid(2, static_cast<int>(state.range(0)), marg);
    Matrix values(static_cast<Eigen::Index>(state.range(1)), static_cast<Eigen::Index>(sg.size()));
    for (Eigen::Index k = 0; k < values.cols(); ++k)
        for (Eigen::Index r = 0; r < values.rows(); ++r)
            values(r, k) = std::exp(sg.points[static_cast<std::size_t>(k)][0]) *
                           std::cos(sg.points[static_cast<std::size_t>(k)][1] + 0.01 * static_cast<double>(r));
    for (auto _ : state) benchmark::DoNotOptimize(lagrange_to_gpc(sg, values));
}
BENCHMARK(BM_LagrangeToGpc)->Args({3, 1})->Args({3, 101})->Args({12, 1})->Args({12, 101})->Unit(benchmark::kMillisecond);

void BM_EvalGpcBatch(benchmark::State& state) {
    const auto marg = box();
    const auto sg = build_sparse_grid(2, 3, marg);
    Matrix values = Matrix::Ones(101, static_cast<Eigen::Index>(sg.size()));
    const auto e = lagrange_to_gpc(sg, values);
    const Matrix inputs = draw_inputs(marg, static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(eval_gpc_batch(e, inputs));
}
BENCHMARK(BM_EvalGpcBatch)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
