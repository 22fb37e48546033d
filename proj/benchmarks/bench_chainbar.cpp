#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "chainbar/barrier.hpp"
#include "chainbar/baseline.hpp"
#include "chainbar/chain.hpp"
#include "chainbar/coverage.hpp"
#include "chainbar/physics.hpp"

using namespace chainbar;

namespace {

constexpr double kRs = 0.5;

// A slack horizontal chain of n bodies, both ends anchored, with the middle
// body pulled up and down on alternate steps. Caps bind as the slack runs out.
void BM_PhysicsStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto settings = physics::WorldSettings::from(AlgoConfig::defaults_for(kRs));
    physics::World world(settings);
    for (std::size_t i = 0; i < n; ++i) world.add_body({(1.9 * static_cast<double>(i) + 1.0) * kRs, 4.0});
    for (std::size_t i = 1; i < n; ++i) world.add_distance_cap(i - 1, i, 2.0 * kRs);
    world.add_line_anchor(0, kRs);
    world.add_line_anchor(n - 1, world.position(n - 1).x);
    double sign = 1.0;
    for (auto _ : state) {
        world.apply_force(n / 2, {0.0, sign * 5.0});
        sign = -sign;
        benchmark::DoNotOptimize(world.step(0.1));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhysicsStep)->Arg(16)->Arg(64)->Arg(256);

void BM_CoverageCheck(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const BeltRegion belt{50.0, 8.0};
    const auto d = uniform_random_deployment(7, n, belt, kRs);
    const auto p = d.initial_positions();
    for (auto _ : state) benchmark::DoNotOptimize(coverage::strong_barrier_covered(p, kRs, belt, 1e-6).covered);
}
BENCHMARK(BM_CoverageCheck)->Arg(60)->Arg(250)->Arg(1000);

void BM_GridOracle(benchmark::State& state) {
    const BeltRegion belt{10.0, 3.0};
    const auto d = uniform_random_deployment(9, 60, belt, kRs);
    const auto p = d.initial_positions();
    for (auto _ : state) benchmark::DoNotOptimize(coverage::grid_gap_oracle(p, kRs, belt, kRs / 8));
}
BENCHMARK(BM_GridOracle);

void BM_DominantPairs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const BeltRegion belt{50.0, 8.0};
    const auto p = uniform_random_deployment(11, n, belt, kRs).initial_positions();
    auto forest = chain::build_chain_forest(p, kRs);
    const auto cfg = AlgoConfig::defaults_for(kRs);
    for (auto _ : state) benchmark::DoNotOptimize(chain::all_dominant_pairs(forest, p, cfg));
}
BENCHMARK(BM_DominantPairs)->Arg(60)->Arg(80);

void BM_LinearBaseline(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = uniform_random_deployment(13, n, {50.0, 8.0}, kRs);
    for (auto _ : state) benchmark::DoNotOptimize(baseline::plan_linear_barrier(d, baseline::Objective::MinAvg));
}
BENCHMARK(BM_LinearBaseline)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_FullRun(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = uniform_random_deployment(17, n, {20.0, 4.0}, kRs);
    auto cfg = AlgoConfig::defaults_for(kRs);
    cfg.rng_seed = 17;
    for (auto _ : state) benchmark::DoNotOptimize(barrier::run(d, cfg).iterations_used);
}
BENCHMARK(BM_FullRun)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
