#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "provfaas/bitset.hpp"
#include "provfaas/graph.hpp"

namespace provfaas {

// K-hop ball around a center node, with the edge set induced by the ball
// (every graph edge whose two endpoints are both inside, frontier-to-frontier
// edges included). Bitsets are over the graph's dense node and edge ids.
struct Neighborhood {
    EntityId center = 0;
    DynamicBitset nodes;
    DynamicBitset edges;
    std::uint64_t edge_count = 0;
};

Neighborhood khop_neighborhood(const ProvenanceGraph& g, EntityId center, unsigned k);

// One packing bin. covered_nodes is the union of the members' ball node sets;
// covered_edges is the edge set induced by covered_nodes and
// covered_edge_count its size, maintained incrementally. remaining is
// capacity minus covered_edge_count and goes negative only for oversize bins.
struct ClusterState {
    std::vector<std::size_t> members;  // seed indices into the packing input
    DynamicBitset covered_nodes;
    DynamicBitset covered_edges;
    std::uint64_t covered_edge_count = 0;
    std::int64_t remaining = 0;
    bool oversize = false;
    std::uint32_t vertical_scale = 1;  // resource multiplier hint for oversize bins
};

// Exact marginal edge count: how many new edges become induced when the
// neighborhood joins the cluster. Counts both the neighborhood's own
// uncovered edges and edges newly induced between cluster nodes and
// neighborhood nodes.
std::uint64_t marginal_cost(const ClusterState& cluster, const Neighborhood& nb, const ProvenanceGraph& g);

enum class FitStrategy : std::uint8_t {
    FirstFit,  // first bin where the margin fits
    BestFit,   // feasible bin minimizing remaining - margin; ties to lowest index
};

struct PackingResult {
    std::vector<ClusterState> bins;
    std::uint64_t capacity = 0;
    bool strict = false;

    std::size_t oversize_bins() const {
        std::size_t n = 0;
        for (const auto& b : bins) n += b.oversize;
        return n;
    }
};

// Test seams: replace the marginal computation or observe every placement.
using MarginalFn =
    std::function<std::uint64_t(const ClusterState&, const Neighborhood&, const ProvenanceGraph&)>;
using PackObserver = std::function<void(const std::vector<ClusterState>&, std::size_t changed_bin)>;

// Greedy decreasing bin packing of neighborhoods under an induced-edge-count
// capacity. Neighborhoods are sorted by edge count descending (ties by
// ascending input index); each is placed into a bin where the marginal cost
// fits (strict: margin < remaining, non-strict: margin <= remaining), or a
// new bin is opened. A single neighborhood too big for any bin still gets its
// own bin, flagged oversize with a vertical-scale hint.
PackingResult binpack_ffd(const ProvenanceGraph& g, const std::vector<Neighborhood>& neighborhoods,
                          std::uint64_t capacity, bool strict, FitStrategy fit,
                          const MarginalFn& marginal = {}, const PackObserver& observer = {});

// One dispatch-ready bin: the subgraph induced by the bin's covered nodes,
// plus which nodes are seeds (centers whose final embeddings this bin owns).
struct PackedBin {
    SubgraphResult sub;
    std::vector<EntityId> seeds;  // parent-graph ids, ascending
    std::uint64_t edge_count = 0;
    bool oversize = false;
    std::uint32_t vertical_scale = 1;
};

std::vector<PackedBin> materialize_bins(const ProvenanceGraph& g,
                                        const std::vector<Neighborhood>& neighborhoods,
                                        const PackingResult& result);

// Debug report: one line per bin with id, seed count, edge count, remaining
// capacity and the oversize flag.
std::string packing_report(const PackingResult& result);

}  // namespace provfaas
