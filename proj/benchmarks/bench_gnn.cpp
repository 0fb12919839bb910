#include <benchmark/benchmark.h>

#include "provfaas/featurize.hpp"
#include "provfaas/gnn.hpp"
#include "provfaas/oracle/reference.hpp"
#include "provfaas/rng.hpp"

using namespace provfaas;

static void BM_EmbedAttr(benchmark::State& state) {
    const std::string attr(static_cast<std::size_t>(state.range(0)), 'x');
    for (auto _ : state) {
        auto v = embed_attr(attr, 64);
        benchmark::DoNotOptimize(v);
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_EmbedAttr)->Arg(16)->Arg(256)->Arg(4096);

static void BM_GnnForward(benchmark::State& state) {
    SplitMix64 rng(5);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ProvenanceGraph g = oracle::random_graph(rng, n, 3.0);
    const GnnModel model = synth_model(6, {64, 64, 32}, Activation::Relu);
    std::map<EntityId, FeatureVector> init;
    for (EntityId v = 0; v < n; ++v) init.emplace(v, embed_attr(g.node(v).attr, 64));

    for (auto _ : state) {
        auto out = forward(g, init, model);
        benchmark::DoNotOptimize(out);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GnnForward)->Arg(500)->Arg(2000);
