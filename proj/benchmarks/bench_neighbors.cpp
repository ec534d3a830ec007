#include "rebal/neighbors.hpp"
#include "rebal/random.hpp"

#include <benchmark/benchmark.h>

namespace {

rebal::Matrix points(std::size_t n, std::size_t d) {
    rebal::Rng gen(n * 31 + d);
    rebal::Matrix m(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) m(i, j) = gen.uniform01();
    }
    return m;
}

void BM_NearestToMember(benchmark::State& state) {
    const rebal::NeighborIndex index(points(static_cast<std::size_t>(state.range(0)), 40));
    std::size_t q = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(index.nearest_to_member(q, 5));
        q = (q + 1) % index.size();
    }
    state.SetItemsProcessed(state.iterations());
}

} // namespace

BENCHMARK(BM_NearestToMember)->Arg(250)->Arg(1000)->Arg(4000);
