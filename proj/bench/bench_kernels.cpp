// OpenMP kernels against their serial twins. Thread count follows AFFINE_SMILE_THREADS.

#include <benchmark/benchmark.h>

#include "affine_smile/ldp.hpp"
#include "affine_smile/pricing.hpp"
#include "affine_smile/smile.hpp"

#include <vector>

using namespace affine_smile;

namespace {

McConfig paths_config(std::size_t n) {
    McConfig cfg;
    cfg.n_paths = n;
    cfg.dt = 1e-3;
    cfg.horizon = 0.25;
    return cfg;
}

void BM_SimulatePaths(benchmark::State& state) {
    const ModelParams p;
    const auto cfg = paths_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(p, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(cfg.steps()));
}

void BM_SimulatePathsSerial(benchmark::State& state) {
    const ModelParams p;
    const auto cfg = paths_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_paths_serial(p, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(cfg.steps()));
}

void BM_RateCurve(benchmark::State& state) {
    const RateFunction rf{ModelParams{}};
    const auto xs = default_x_grid(rf.params(), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rate_curve(rf, xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RateCurveSerial(benchmark::State& state) {
    const RateFunction rf{ModelParams{}};
    const auto xs = default_x_grid(rf.params(), static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(rate_curve_serial(rf, xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_WingTable(benchmark::State& state) {
    const ModelParams p;
    const std::vector<double> ts{2, 4, 6, 8, 10};
    for (auto _ : state) benchmark::DoNotOptimize(wing_table(p, ts, Side::Right));
}

void BM_WingTableSerial(benchmark::State& state) {
    const ModelParams p;
    const std::vector<double> ts{2, 4, 6, 8, 10};
    for (auto _ : state) benchmark::DoNotOptimize(wing_table_serial(p, ts, Side::Right));
}

}  // namespace

BENCHMARK(BM_SimulatePaths)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulatePathsSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateCurve)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RateCurveSerial)->Arg(201)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WingTable)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WingTableSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
