#include <benchmark/benchmark.h>

#include "htsroute/arrivals.hpp"
#include "htsroute/controllers.hpp"
#include "htsroute/formulation.hpp"
#include "htsroute/plant.hpp"

namespace {

using namespace hts;

void BM_PoissonSample(benchmark::State& state) {
    SplitMix64 rng(1);
    const double mean = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_poisson(rng, mean));
}
BENCHMARK(BM_PoissonSample)->Arg(1)->Arg(10)->Arg(100)->Arg(1000);

void BM_GenerateDemands(benchmark::State& state) {
    const ScenarioConfig config;
    int run = 0;
    for (auto _ : state) benchmark::DoNotOptimize(generate_demands(config, run++));
}
BENCHMARK(BM_GenerateDemands);

void BM_PlantStep(benchmark::State& state) {
    const ScenarioConfig config;
    const auto M = static_cast<std::size_t>(config.num_modules);
    ControlDecision decision{Matrix(M, 3), Matrix(M, 3, 1.0)};
    for (std::size_t m = 0; m < M; ++m) {
        decision.weights(m, 0) = 0.5;
        decision.weights(m, 1) = 0.3;
        decision.weights(m, 2) = 0.2;
    }
    const std::vector<double> realized{60.0, 150.0, 600.0};
    PlantState plant = PlantState::initial(config);
    for (auto _ : state) {
        auto [next, outcome] = step(plant, decision, realized, config);
        benchmark::DoNotOptimize(outcome.step_cost);
    }
}
BENCHMARK(BM_PlantStep);

void BM_MpcWindowSolve(benchmark::State& state) {
    ScenarioConfig config;
    config.window = static_cast<int>(state.range(0));
    const auto demand = generate_demands(config, 0);
    const auto plant = PlantState::initial(config);
    for (auto _ : state)
        benchmark::DoNotOptimize(decide_step_mpc(config, plant, 40, demand.expected, config.window));
}
BENCHMARK(BM_MpcWindowSolve)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_BatchSolve(benchmark::State& state) {
    ScenarioConfig config;
    config.horizon = static_cast<int>(state.range(0));
    const auto demand = generate_demands(config, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(decide_offline(PolicyKind::batch(), config, demand.realized).objective);
}
BENCHMARK(BM_BatchSolve)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
