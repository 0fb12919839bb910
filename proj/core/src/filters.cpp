#include "provfaas/filters.hpp"

#include <stdexcept>
#include <string>

#include "provfaas/bitset.hpp"

namespace provfaas {

namespace {

// Multi-source BFS on the undirected view, truncated at `depth` hops.
std::vector<EntityId> bfs_closure(const ProvenanceGraph& g, std::span<const EntityId> seeds, unsigned depth) {
    DynamicBitset visited(g.node_count());
    std::vector<EntityId> frontier;
    frontier.reserve(seeds.size());
    for (EntityId v : seeds) {
        if (!visited.test(v)) {
            visited.set(v);
            frontier.push_back(v);
        }
    }
    std::vector<EntityId> next;
    for (unsigned hop = 0; hop < depth && !frontier.empty(); ++hop) {
        next.clear();
        for (EntityId v : frontier) {
            g.for_each_incident(v, [&](std::uint64_t, EntityId u) {
                if (!visited.test(u)) {
                    visited.set(u);
                    next.push_back(u);
                }
            });
        }
        frontier.swap(next);
    }
    return visited.to_indices();  // ascending by construction
}

}  // namespace

std::vector<EntityId> locality_filter(const ProvenanceGraph& g, std::span<const EntityId> active,
                                      unsigned k_layers) {
    for (EntityId v : active)
        if (!g.contains(v))
            throw std::invalid_argument("locality_filter: active node " + std::to_string(v) +
                                        " is not in the graph");
    return bfs_closure(g, active, 2 * k_layers);
}

std::vector<EntityId> frequency_filter(const ProvenanceGraph& g, const FrequencyDb& db, unsigned k_layers) {
    DynamicBitset rare_endpoints(g.node_count());
    for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
        const EdgeRecord& er = g.edge(e);
        const std::string sig =
            edge_signature(g.node(er.src).type, er.type, g.node(er.dst).attr);
        if (db.is_rare(sig)) {
            rare_endpoints.set(er.src);
            rare_endpoints.set(er.dst);
        }
    }
    std::vector<EntityId> seeds;
    rare_endpoints.for_each_set([&](std::size_t v) { seeds.push_back(v); });
    return bfs_closure(g, seeds, 2 * k_layers);
}

}  // namespace provfaas
