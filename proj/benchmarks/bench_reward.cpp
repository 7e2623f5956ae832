#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "nodeforge/reward.hpp"

namespace {

std::vector<double> random_objectives(std::size_t length) {
    std::mt19937_64 rng(length);
    std::uniform_real_distribution<double> dist(-5.0, 0.0);
    std::vector<double> objectives(length);
    for (double& value : objectives) value = dist(rng);
    return objectives;
}

void BM_ConsistencyScore(benchmark::State& state) {
    const auto objectives = random_objectives(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nodeforge::consistency_score(objectives));
    }
}
BENCHMARK(BM_ConsistencyScore)->Arg(3)->Arg(10)->Arg(50);

void BM_StepRewards(benchmark::State& state) {
    const auto qualities = random_objectives(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nodeforge::step_rewards(qualities));
    }
}
BENCHMARK(BM_StepRewards)->Arg(3)->Arg(10)->Arg(50);

void BM_QualityPipeline(benchmark::State& state) {
    const auto objectives = random_objectives(16);
    for (auto _ : state) {
        double last = 0.0;
        for (double j_t : objectives) {
            const double delta = nodeforge::relative_gain(j_t, -2.0);
            last = nodeforge::quality_score(nodeforge::improvement_score(delta), 0.5, 0.6);
        }
        benchmark::DoNotOptimize(last);
    }
}
BENCHMARK(BM_QualityPipeline);

}  // namespace

BENCHMARK_MAIN();
