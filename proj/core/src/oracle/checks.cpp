#include "provfaas/oracle/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "provfaas/featurize.hpp"
#include "provfaas/filters.hpp"
#include "provfaas/gnn.hpp"
#include "provfaas/sim.hpp"

namespace provfaas::oracle {

namespace {

std::vector<Neighborhood> seed_neighborhoods(const ProvenanceGraph& g, SplitMix64& rng,
                                             std::size_t max_seeds, unsigned k) {
    const std::size_t n = g.node_count();
    const std::size_t count = 1 + rng.next_below(std::min<std::uint64_t>(max_seeds, n));
    std::vector<Neighborhood> nbs;
    nbs.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        nbs.push_back(khop_neighborhood(g, rng.next_below(n), k));
    return nbs;
}

}  // namespace

CheckResult check_locality(std::uint64_t runs, std::size_t max_nodes, std::uint64_t base_seed) {
    CheckResult r;
    r.name = "locality-filter-vs-bfs";
    r.runs = runs;
    for (std::uint64_t run = 0; run < runs; ++run) {
        const std::uint64_t seed = base_seed + run;
        SplitMix64 rng(derive_seed(seed, "locality"));
        const std::size_t n = 2 + rng.next_below(max_nodes - 1);
        const double degree = 0.5 + rng.next_double() * 3.0;
        const ProvenanceGraph g = random_graph(rng, n, degree);

        const unsigned k = 1 + static_cast<unsigned>(rng.next_below(3));
        const std::size_t active_count = 1 + rng.next_below(std::min<std::uint64_t>(n, 32));
        std::vector<EntityId> active;
        for (std::size_t i = 0; i < active_count; ++i) active.push_back(rng.next_below(n));
        std::sort(active.begin(), active.end());
        active.erase(std::unique(active.begin(), active.end()), active.end());

        const std::vector<EntityId> fast = locality_filter(g, active, k);
        const std::vector<EntityId> slow = bfs_ball(g, active, 2 * k);
        if (fast != slow) r.failing_seeds.push_back(seed);
    }
    return r;
}

CheckResult check_packing_bookkeeping(std::uint64_t runs, std::size_t max_nodes, std::uint64_t base_seed,
                                      const MarginalFn& marginal) {
    CheckResult r;
    r.name = "packing-delta-bookkeeping";
    r.runs = runs;
    for (std::uint64_t run = 0; run < runs; ++run) {
        const std::uint64_t seed = base_seed + run;
        SplitMix64 rng(derive_seed(seed, "packing"));
        const std::size_t n = 4 + rng.next_below(max_nodes - 3);
        const ProvenanceGraph g = random_graph(rng, n, 0.5 + rng.next_double() * 2.5);
        const auto nbs = seed_neighborhoods(g, rng, 64, 2);
        const std::uint64_t capacity = 1 + rng.next_below(std::max<std::uint64_t>(g.edge_count(), 2));
        const bool strict = rng.next_below(2) == 1;
        const FitStrategy fit = rng.next_below(2) == 1 ? FitStrategy::BestFit : FitStrategy::FirstFit;

        bool mismatch = false;
        binpack_ffd(g, nbs, capacity, strict, fit, marginal,
                    [&](const std::vector<ClusterState>& bins, std::size_t changed) {
                        const ClusterState& bin = bins[changed];
                        if (recount_induced_edges(g, bin.covered_nodes) != bin.covered_edge_count)
                            mismatch = true;
                    });
        if (mismatch) r.failing_seeds.push_back(seed);
    }
    return r;
}

CheckResult check_packing_validity(std::uint64_t runs, std::size_t max_nodes, std::uint64_t base_seed) {
    CheckResult r;
    r.name = "packing-validity";
    r.runs = runs;
    for (std::uint64_t run = 0; run < runs; ++run) {
        const std::uint64_t seed = base_seed + run;
        SplitMix64 rng(derive_seed(seed, "validity"));
        const std::size_t n = 4 + rng.next_below(max_nodes - 3);
        const ProvenanceGraph g = random_graph(rng, n, 0.5 + rng.next_double() * 2.5);
        const auto nbs = seed_neighborhoods(g, rng, 64, 2);
        const std::uint64_t capacity = 1 + rng.next_below(std::max<std::uint64_t>(g.edge_count(), 2));

        bool bad = false;
        for (const bool strict : {false, true}) {
            for (const FitStrategy fit : {FitStrategy::FirstFit, FitStrategy::BestFit}) {
                const PackingResult packed = binpack_ffd(g, nbs, capacity, strict, fit);

                std::vector<std::size_t> placed(nbs.size(), 0);
                for (const ClusterState& bin : packed.bins) {
                    for (std::size_t idx : bin.members) {
                        ++placed[idx];
                        if (!nbs[idx].nodes.is_subset_of(bin.covered_nodes)) bad = true;
                    }
                    if (!bin.oversize) {
                        if (strict ? bin.covered_edge_count >= capacity : bin.covered_edge_count > capacity)
                            bad = true;
                    }
                    if (bin.remaining !=
                        static_cast<std::int64_t>(capacity) - static_cast<std::int64_t>(bin.covered_edge_count))
                        bad = true;
                }
                for (std::size_t c : placed)
                    if (c != 1) bad = true;
                if (packed.bins.empty() != nbs.empty() || packed.bins.size() > nbs.size()) bad = true;
            }
        }
        if (bad) r.failing_seeds.push_back(seed);
    }
    return r;
}

CheckResult check_packing_optimal(std::uint64_t runs, std::uint64_t base_seed) {
    CheckResult r;
    r.name = "packing-vs-exhaustive-optimal";
    r.runs = runs;
    for (std::uint64_t run = 0; run < runs; ++run) {
        const std::uint64_t seed = base_seed + run;
        SplitMix64 rng(derive_seed(seed, "optimal"));
        const std::size_t n = 6 + rng.next_below(30);
        const ProvenanceGraph g = random_graph(rng, n, 0.5 + rng.next_double() * 2.0);
        const auto nbs = seed_neighborhoods(g, rng, 8, 2);
        const std::uint64_t capacity = 1 + rng.next_below(std::max<std::uint64_t>(g.edge_count(), 2));

        bool bad = false;
        for (const bool strict : {false, true}) {
            const std::size_t best = optimal_bin_count(g, nbs, capacity, strict);
            for (const FitStrategy fit : {FitStrategy::FirstFit, FitStrategy::BestFit}) {
                const PackingResult packed = binpack_ffd(g, nbs, capacity, strict, fit);
                if (packed.bins.size() < best) bad = true;
            }
        }
        if (bad) r.failing_seeds.push_back(seed);
    }
    return r;
}

CheckResult check_gnn_equivalence(std::uint64_t runs, std::size_t nodes, std::uint64_t base_seed) {
    CheckResult r;
    r.name = "gnn-partitioned-vs-monolithic";
    r.runs = runs;
    for (std::uint64_t run = 0; run < runs; ++run) {
        const std::uint64_t seed = base_seed + run;
        SplitMix64 rng(derive_seed(seed, "gnn"));
        const std::size_t n = std::max<std::size_t>(nodes / 2, 2) + rng.next_below(nodes / 2 + 1);
        const ProvenanceGraph g = random_graph(rng, n, 0.5 + rng.next_double() * 2.0);

        const unsigned k = 2;
        const std::size_t dim = 8;
        const GnnModel model = synth_model(derive_seed(seed, "gnn-model"), {dim, dim, 4},
                                           rng.next_below(2) ? Activation::Tanh : Activation::Relu);

        std::map<EntityId, FeatureVector> init;
        for (EntityId v = 0; v < n; ++v) init.emplace(v, embed_attr(g.node(v).attr, dim));

        std::vector<Neighborhood> nbs;
        nbs.reserve(n);
        for (EntityId v = 0; v < n; ++v) nbs.push_back(khop_neighborhood(g, v, k));
        const std::uint64_t capacity = 1 + rng.next_below(std::max<std::uint64_t>(g.edge_count(), 2));
        const PackingResult packed = binpack_ffd(g, nbs, capacity, false, FitStrategy::BestFit);
        const auto bins = materialize_bins(g, nbs, packed);

        const auto partitioned = run_inference_stage(bins, init, model);
        const auto monolithic = forward(g, init, model);

        bool bad = partitioned.size() != n;
        if (!bad) {
            for (const auto& [v, vec] : partitioned) {
                const FeatureVector& mono = monolithic.at(v);
                if (vec.size() != mono.size()) {
                    bad = true;
                    break;
                }
                for (std::size_t i = 0; i < vec.size(); ++i)
                    if (std::memcmp(&vec[i], &mono[i], sizeof(float)) != 0) {
                        bad = true;
                        break;
                    }
                if (bad) break;
            }
        }
        if (!bad) {
            const auto reference = dense_forward(g, init, model);
            for (const auto& [v, vec] : monolithic) {
                const FeatureVector& ref = reference.at(v);
                for (std::size_t i = 0; i < vec.size(); ++i)
                    if (std::abs(static_cast<double>(vec[i]) - static_cast<double>(ref[i])) > 1e-4) {
                        bad = true;
                        break;
                    }
                if (bad) break;
            }
        }
        if (bad) r.failing_seeds.push_back(seed);
    }
    return r;
}

CheckResult check_stats(std::uint64_t runs, std::uint64_t base_seed) {
    CheckResult r;
    r.name = "latency-stats-vs-welford";
    r.runs = runs;
    for (std::uint64_t run = 0; run < runs; ++run) {
        const std::uint64_t seed = base_seed + run;
        SplitMix64 rng(derive_seed(seed, "stats"));
        const std::size_t n = 1 + rng.next_below(5000);
        std::vector<double> xs(n);
        for (double& x : xs) x = 0.001 + rng.next_double() * 10000.0;

        const LatencyStats fast = latency_stats(xs);
        const StreamingStats slow = welford(xs);
        if (std::abs(fast.mean - slow.mean) > 1e-9 * std::max(1.0, slow.mean) ||
            std::abs(fast.stddev - slow.stddev) > 1e-9 * std::max(1.0, slow.stddev))
            r.failing_seeds.push_back(seed);
    }
    return r;
}

CheckResult check_featurize_schedule(std::uint64_t runs, std::size_t nodes, std::uint64_t base_seed) {
    CheckResult r;
    r.name = "featurize-scheduling-independence";
    r.runs = runs;
    for (std::uint64_t run = 0; run < runs; ++run) {
        const std::uint64_t seed = base_seed + run;
        SplitMix64 rng(derive_seed(seed, "featurize"));

        std::vector<std::pair<EntityId, std::string>> attrs;
        attrs.reserve(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            std::string attr = "/proc/" + std::to_string(rng.next_below(4096)) + "/cmd";
            const std::size_t extra = rng.next_below(120);
            for (std::size_t c = 0; c < extra; ++c)
                attr += static_cast<char>('a' + rng.next_below(26));
            attrs.emplace_back(i, attr);
        }

        const auto baseline = run_embedding_stage(attrs, 1e18, 32);
        bool bad = false;
        for (int b = 0; b < 5 && !bad; ++b) {
            const double budget = 1.0 + rng.next_double() * 200.0;
            const auto alt = run_embedding_stage(attrs, budget, 32);
            if (alt.vectors != baseline.vectors) bad = true;
        }
        if (bad) r.failing_seeds.push_back(seed);
    }
    return r;
}

}  // namespace provfaas::oracle
