#pragma once

#include <span>
#include <vector>

#include "provfaas/frequency.hpp"
#include "provfaas/graph.hpp"

namespace provfaas {

// Nodes within undirected hop distance 2*k_layers of any active node, where
// k_layers is the GNN layer count. That is exactly the region whose final
// embeddings can change when the active nodes change. Result is sorted and
// always contains the active set. Throws std::invalid_argument naming the id
// if an active node is not in the graph.
std::vector<EntityId> locality_filter(const ProvenanceGraph& g, std::span<const EntityId> active,
                                      unsigned k_layers);

// Endpoints of every rare edge (signature count <= db threshold), closed
// under the same 2*k_layers undirected neighborhood. Sorted.
std::vector<EntityId> frequency_filter(const ProvenanceGraph& g, const FrequencyDb& db, unsigned k_layers);

}  // namespace provfaas
