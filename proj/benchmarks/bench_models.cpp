#include "rebal/models.hpp"
#include "rebal/random.hpp"

#include <benchmark/benchmark.h>

namespace {

struct Data {
    rebal::FeatureMatrix x;
    std::vector<int> y;
};

const Data& data() {
    static const Data d = [] {
        constexpr std::size_t n = 7000;
        constexpr std::size_t cols = 40;
        rebal::Rng gen(3);
        Data out;
        for (std::size_t j = 0; j < cols; ++j) out.x.column_names.push_back("f" + std::to_string(j));
        out.x.values = rebal::Matrix(n, cols);
        out.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) {
                const double v = j < 8 ? gen.uniform01() : (gen.uniform01() < 0.2 ? 1.0 : 0.0);
                out.x.values(i, j) = v;
                s += (j % 3 == 0 ? 1.0 : -0.5) * v;
            }
            out.y[i] = s + 0.3 * gen.normal() > 0.4 ? 1 : 0;
        }
        return out;
    }();
    return d;
}

void fit(benchmark::State& state, rebal::ModelFamily family) {
    auto cfg = rebal::ModelConfig::defaults_for(family);
    cfg.n_trees = 20;
    cfg.rounds = 20;
    cfg.threads = static_cast<unsigned>(state.range(0));
    const auto& d = data();
    for (auto _ : state) {
        benchmark::DoNotOptimize(rebal::fit_model(d.x, d.y, cfg));
    }
}

void BM_FitLogistic(benchmark::State& state) { fit(state, rebal::ModelFamily::Logistic); }
void BM_FitTree(benchmark::State& state) { fit(state, rebal::ModelFamily::DecisionTree); }
void BM_FitForest(benchmark::State& state) { fit(state, rebal::ModelFamily::RandomForest); }
void BM_FitBoosted(benchmark::State& state) { fit(state, rebal::ModelFamily::GradientBoosting); }

} // namespace

BENCHMARK(BM_FitLogistic)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitTree)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitForest)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FitBoosted)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
