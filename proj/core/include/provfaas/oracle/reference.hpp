#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "provfaas/bitset.hpp"
#include "provfaas/featurize.hpp"
#include "provfaas/gnn.hpp"
#include "provfaas/graph.hpp"
#include "provfaas/partition.hpp"
#include "provfaas/rng.hpp"

namespace provfaas::oracle {

// Reference implementations, deliberately naive and structurally unlike the
// optimized paths they check: std::set frontiers instead of bitsets, full
// rescans instead of incremental bookkeeping, double precision dense math
// instead of the engine's f32 kernels.

// Depth-limited breadth-first search from a seed set, undirected view.
std::vector<EntityId> bfs_ball(const ProvenanceGraph& g, std::span<const EntityId> seeds, unsigned depth);

// |E_G[nodes]| recomputed from scratch by scanning the full edge table.
std::uint64_t recount_induced_edges(const ProvenanceGraph& g, const DynamicBitset& nodes);

// Minimum bin count over all set partitions of the neighborhoods where each
// block's union stays within capacity (single-neighborhood blocks are always
// feasible, mirroring the oversize rule). Exhaustive; inputs of size <= 8.
std::size_t optimal_bin_count(const ProvenanceGraph& g, const std::vector<Neighborhood>& nbs,
                              std::uint64_t capacity, bool strict);

// Per-node dense message passing in double precision. Agrees with the f32
// engine to within accumulated rounding, not bitwise.
std::map<EntityId, FeatureVector> dense_forward(const ProvenanceGraph& g,
                                                const std::map<EntityId, FeatureVector>& init,
                                                const GnnModel& model);

// Welford's streaming mean and population standard deviation.
struct StreamingStats {
    double mean = 0;
    double stddev = 0;
};
StreamingStats welford(std::span<const double> samples);

// Random multigraph builder used by every randomized check: n nodes, about
// n*avg_degree directed edges (self-loops allowed), built through the normal
// event-ingestion path.
ProvenanceGraph random_graph(SplitMix64& rng, std::size_t nodes, double avg_degree);

}  // namespace provfaas::oracle
