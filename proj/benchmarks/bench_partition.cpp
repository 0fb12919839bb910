#include <benchmark/benchmark.h>

#include "provfaas/oracle/reference.hpp"
#include "provfaas/partition.hpp"
#include "provfaas/rng.hpp"

using namespace provfaas;

namespace {

struct PackingFixture {
    ProvenanceGraph g;
    std::vector<Neighborhood> nbs;
};

PackingFixture make_fixture(std::size_t nodes, std::size_t seeds) {
    SplitMix64 rng(3);
    PackingFixture f;
    f.g = oracle::random_graph(rng, nodes, 2.5);
    for (std::size_t i = 0; i < seeds; ++i)
        f.nbs.push_back(khop_neighborhood(f.g, rng.next_below(nodes), 2));
    return f;
}

}  // namespace

static void BM_KhopNeighborhood(benchmark::State& state) {
    SplitMix64 rng(4);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ProvenanceGraph g = oracle::random_graph(rng, n, 3.0);
    EntityId v = 0;
    for (auto _ : state) {
        auto nb = khop_neighborhood(g, v, 2);
        benchmark::DoNotOptimize(nb.edge_count);
        v = (v + 1) % n;
    }
}
BENCHMARK(BM_KhopNeighborhood)->Arg(1000)->Arg(10000);

static void BM_BinPackFirstFit(benchmark::State& state) {
    const auto f = make_fixture(2000, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto packed = binpack_ffd(f.g, f.nbs, 400, false, FitStrategy::FirstFit);
        benchmark::DoNotOptimize(packed.bins.size());
    }
}
BENCHMARK(BM_BinPackFirstFit)->Arg(64)->Arg(256);

static void BM_BinPackBestFit(benchmark::State& state) {
    const auto f = make_fixture(2000, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto packed = binpack_ffd(f.g, f.nbs, 400, false, FitStrategy::BestFit);
        benchmark::DoNotOptimize(packed.bins.size());
    }
}
BENCHMARK(BM_BinPackBestFit)->Arg(64)->Arg(256);
