#include "rebal/random.hpp"
#include "rebal/resampling.hpp"

#include <benchmark/benchmark.h>

namespace {

rebal::ClassPartition partition(std::size_t majority, std::size_t minority, std::size_t d) {
    rebal::Rng gen(7);
    rebal::ClassPartition p;
    p.majority = rebal::Matrix(majority, d);
    p.minority = rebal::Matrix(minority, d);
    for (auto* m : {&p.majority, &p.minority}) {
        for (std::size_t i = 0; i < m->rows(); ++i) {
            for (std::size_t j = 0; j < d; ++j) (*m)(i, j) = gen.uniform01();
        }
    }
    return p;
}

void BM_Smote(benchmark::State& state) {
    const auto p = partition(1, static_cast<std::size_t>(state.range(0)), 40);
    rebal::SmoteParams params;
    params.k = 5;
    params.multiplier = 4;
    params.seed = 1;
    params.threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rebal::smote(p.minority, params));
    }
}

void BM_NearMiss(benchmark::State& state) {
    const int variant = static_cast<int>(state.range(0));
    const auto p = partition(6000, 1100, 40);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rebal::nearmiss(p, variant, 3, p.minority.rows()));
    }
}

} // namespace

BENCHMARK(BM_Smote)->Args({280, 1})->Args({1100, 1})->Args({1100, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearMiss)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);
