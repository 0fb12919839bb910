#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "provfaas/types.hpp"

namespace provfaas {

struct NodeRecord {
    std::string key;
    EntityType type = EntityType::Process;
    std::string attr;
};

struct EdgeRecord {
    EntityId src = 0;
    EntityId dst = 0;
    EventType type = EventType::Other;
    std::int64_t ts_ns = 0;
};

// Frozen view of one detection interval: which nodes were touched.
struct ActiveSnapshot {
    DetectionInterval interval;
    std::vector<EntityId> active;  // sorted ascending
    std::uint64_t graph_version = 0;
};

// Typed temporal multigraph of system entities and events.
//
// Single-writer: exactly one logical writer ingests events; readers operate
// on the object between ingest calls (filters, snapshots, subgraphs) and
// must not run concurrently with ingestion.
class ProvenanceGraph {
public:
    explicit ProvenanceGraph(std::int64_t skew_window_ns = 5'000'000'000) : skew_window_ns_(skew_window_ns) {}

    // Appends the event as a directed edge subject -> object, interning both
    // endpoints. Returns false when the event is older than the skew window
    // and was dropped (the warning counter is incremented).
    bool ingest(const LogEvent& e);

    // Freezes the current interval's active set and resets it for the next
    // interval. Graph content is unchanged.
    ActiveSnapshot close_interval(const DetectionInterval& iv);

    // Structural construction, bypassing event semantics. Used by
    // induced_subgraph and by tests that only care about topology.
    EntityId add_node(std::string key, EntityType type, std::string attr);
    std::uint64_t add_edge(EntityId src, EntityId dst, EventType type, std::int64_t ts_ns);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const NodeRecord& node(EntityId v) const { return nodes_.at(v); }
    const EdgeRecord& edge(std::uint64_t e) const { return edges_.at(e); }

    std::optional<EntityId> find(std::string_view key) const;
    bool contains(EntityId v) const { return v < nodes_.size(); }

    std::span<const std::uint64_t> out_edge_ids(EntityId v) const { return out_edges_.at(v); }
    std::span<const std::uint64_t> in_edge_ids(EntityId v) const { return in_edges_.at(v); }

    // Visits every edge incident to v on the undirected view, as
    // f(edge_id, other_endpoint). Self-loops are visited once.
    template <typename F>
    void for_each_incident(EntityId v, F&& f) const {
        for (auto e : out_edges_[v]) f(e, edges_[e].dst);
        for (auto e : in_edges_[v]) {
            if (edges_[e].src == v && edges_[e].dst == v) continue;  // self-loop already seen
            f(e, edges_[e].src);
        }
    }

    const std::unordered_set<EntityId>& interval_active() const { return interval_active_; }
    std::uint64_t dropped_events() const { return dropped_events_; }
    std::uint64_t version() const { return version_; }
    std::int64_t skew_window_ns() const { return skew_window_ns_; }

private:
    EntityId intern(const EntityRef& ref);

    std::vector<NodeRecord> nodes_;
    std::vector<EdgeRecord> edges_;
    std::vector<std::vector<std::uint64_t>> out_edges_;
    std::vector<std::vector<std::uint64_t>> in_edges_;
    std::unordered_map<std::string, EntityId> key_to_id_;

    std::unordered_set<EntityId> interval_active_;
    std::int64_t skew_window_ns_;
    std::int64_t max_ts_ns_ = INT64_MIN;
    std::uint64_t dropped_events_ = 0;
    std::uint64_t version_ = 0;
};

// Node-id remap produced by induced_subgraph. Local ids are assigned in
// ascending parent-id order, so relative order is preserved.
struct SubgraphResult {
    ProvenanceGraph graph;
    std::vector<EntityId> to_parent;                    // local id -> parent id
    std::unordered_map<EntityId, EntityId> to_local;    // parent id -> local id
};

// Materializes the subgraph induced by `keep`: exactly those nodes plus every
// edge of g with both endpoints kept. Attributes and timestamps preserved.
// `keep` must be sorted ascending and contain only valid node ids.
SubgraphResult induced_subgraph(const ProvenanceGraph& g, std::span<const EntityId> keep);

}  // namespace provfaas
