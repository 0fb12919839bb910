#include <benchmark/benchmark.h>

#include "provfaas/filters.hpp"
#include "provfaas/oracle/reference.hpp"
#include "provfaas/rng.hpp"

using namespace provfaas;

static void BM_LocalityFilter(benchmark::State& state) {
    SplitMix64 rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ProvenanceGraph g = oracle::random_graph(rng, n, 3.0);
    std::vector<EntityId> active;
    for (int i = 0; i < 32; ++i) active.push_back(rng.next_below(n));
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());

    for (auto _ : state) {
        auto kept = locality_filter(g, active, 2);
        benchmark::DoNotOptimize(kept);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_LocalityFilter)->Arg(1000)->Arg(10000)->Arg(100000);

static void BM_InducedSubgraph(benchmark::State& state) {
    SplitMix64 rng(2);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ProvenanceGraph g = oracle::random_graph(rng, n, 3.0);
    std::vector<EntityId> keep;
    for (EntityId v = 0; v < n; v += 2) keep.push_back(v);

    for (auto _ : state) {
        auto sub = induced_subgraph(g, keep);
        benchmark::DoNotOptimize(sub.graph.edge_count());
    }
}
BENCHMARK(BM_InducedSubgraph)->Arg(1000)->Arg(10000);
