#include <benchmark/benchmark.h>

#include "bcp/bridge.hpp"
#include "bcp/engine.hpp"
#include "bcp/grid.hpp"
#include "bcp/model.hpp"
#include "bcp/oracles.hpp"

namespace {

const bcp::UnitDiffusion& brownian() {
    static const auto u = bcp::to_unit_diffusion(bcp::models::brownian());
    return u;
}

const bcp::UnitDiffusion& ou() {
    static const auto u = bcp::to_unit_diffusion(bcp::models::ornstein_uhlenbeck());
    return u;
}

bcp::LatticeLadder daniels_ladder(int n) {
    const auto bounds = bcp::make_boundary_pair({}, bcp::daniels_boundary, 0.0, n);
    return bcp::build_ladder(bcp::uniform_time_grid(n), bounds, 0.0, {2.0, 0.0},
                             {bcp::AbsorbingLower{-3.0}});
}

bcp::LatticeLadder ou_ladder(int n) {
    const auto bounds = bcp::make_boundary_pair(bcp::ou_psi_lower, bcp::ou_psi_upper, 0.0, n);
    return bcp::build_ladder(bcp::uniform_time_grid(n), bounds, 0.0, {1.5, 0.0});
}

void BM_BuildStage(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ladder = daniels_ladder(n);
    for (auto _ : state) {
        auto stage = bcp::build_stage(brownian(), ladder, n / 2, bcp::Scheme::taylor2, {});
        benchmark::DoNotOptimize(stage.entries.data());
    }
    state.counters["rows"] = static_cast<double>(ladder.levels[n / 2 - 1].size());
}
BENCHMARK(BM_BuildStage)->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_SolveDaniels(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ladder = daniels_ladder(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bcp::solve(brownian(), ladder).probability);
    }
}
BENCHMARK(BM_SolveDaniels)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond);

void BM_SolveOu(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ladder = ou_ladder(n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bcp::solve(ou(), ladder).probability);
    }
}
BENCHMARK(BM_SolveOu)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

void BM_SweepStoredStages(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ladder = ou_ladder(n);
    std::vector<bcp::TransitionStage> stages;
    for (int k = 1; k <= n; ++k) stages.push_back(bcp::build_stage(ou(), ladder, k, bcp::Scheme::taylor2, {}));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bcp::sweep(stages, ladder).probability);
    }
}
BENCHMARK(BM_SweepStoredStages)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_TwoSidedBridge(benchmark::State& state) {
    const bcp::BridgeSegment seg{0.01, -1.0, -0.9, 1.0, 1.1};
    const auto method = state.range(0) == 0 ? bcp::TwoSidedMethod::sum : bcp::TwoSidedMethod::series;
    double x = 0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bcp::crossing_probability(x, 0.3, seg, method));
        x = x > 0.8 ? 0.2 : x + 1e-3;
    }
}
BENCHMARK(BM_TwoSidedBridge)->Arg(0)->Arg(1);

void BM_MonteCarlo(benchmark::State& state) {
    const auto bounds = bcp::make_boundary_pair({}, bcp::daniels_boundary, 0.0, 256);
    bcp::McOptions options;
    options.n_steps = 256;
    options.paths = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bcp::mc_bcp(brownian(), bounds, options).mean);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarlo)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
