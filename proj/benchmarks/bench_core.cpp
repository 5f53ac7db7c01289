#include "gbtwin/granulation.hpp"
#include "gbtwin/kernels.hpp"
#include "gbtwin/numerics.hpp"
#include "gbtwin/twinpair.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace gbtwin;

namespace {

Matrix normal(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    return Matrix::NullaryExpr(rows, cols, [&] { return n(rng); });
}

LabeledDataset clustered(std::size_t n, int classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    LabeledDataset d;
    d.features = normal(rng, static_cast<Eigen::Index>(n), 4);
    for (std::size_t i = 0; i < n; ++i) {
        const int l = static_cast<int>(i % static_cast<std::size_t>(classes));
        d.features(static_cast<Eigen::Index>(i), 0) += 3.0 * l;
        d.labels.push_back(l);
    }
    return d;
}

}  // namespace

static void BM_SolveBoxQp(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 rng(1);
    const Matrix g = normal(rng, n, 5);
    const Matrix m = g * g.transpose() + 1e-3 * Matrix::Identity(n, n);
    const Vector c = Vector::Ones(n);
    const Vector u = Vector::Constant(n, 1.0);
    const BoxQp qp(m, c, u);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_box_qp(qp));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_SolveBoxQp)->RangeMultiplier(2)->Range(16, 512)->Complexity();

static void BM_GaussianGram(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 rng(2);
    const Matrix x = normal(rng, n, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gram(x, x, KernelSpec::gaussian(1.0)));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_GaussianGram)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

static void BM_GenerateBalls(benchmark::State& state) {
    const LabeledDataset d = clustered(static_cast<std::size_t>(state.range(0)), 3, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_balls(d, 0.97, 2, 0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenerateBalls)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_TrainPair(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const auto n = static_cast<Eigen::Index>(state.range(0));
    Matrix a = normal(rng, n, 4);
    Matrix b = normal(rng, n, 4);
    b.col(0).array() += 3.0;
    const PairProblem p = PairProblem::from_points(a, b, normal(rng, n, 4));
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_pair(p, HyperParams{}));
    }
}
BENCHMARK(BM_TrainPair)->Arg(10)->Arg(50)->Arg(200);
BENCHMARK_MAIN();
