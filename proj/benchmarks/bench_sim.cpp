#include <benchmark/benchmark.h>

#include "provfaas/sim.hpp"
#include "provfaas/workload.hpp"

using namespace provfaas;

static void BM_Simulate(benchmark::State& state) {
    SyntheticSpec spec;
    spec.intervals = static_cast<std::uint64_t>(state.range(0));
    const auto jobs = generate_workload(spec, UnitSplitParams{}, 1);

    SimConfig cfg;
    cfg.mode = state.range(1) ? SimMode::Serverless : SimMode::Static;
    for (auto _ : state) {
        auto report = simulate(jobs, cfg);
        benchmark::DoNotOptimize(report.trace.samples.size());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Simulate)->Args({240, 0})->Args({240, 1})->Args({2400, 1});
