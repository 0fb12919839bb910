#include "provfaas/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace provfaas {

EntityId ProvenanceGraph::add_node(std::string key, EntityType type, std::string attr) {
    const EntityId id = nodes_.size();
    key_to_id_.emplace(key, id);
    nodes_.push_back(NodeRecord{std::move(key), type, std::move(attr)});
    out_edges_.emplace_back();
    in_edges_.emplace_back();
    ++version_;
    return id;
}

std::uint64_t ProvenanceGraph::add_edge(EntityId src, EntityId dst, EventType type, std::int64_t ts_ns) {
    if (src >= nodes_.size() || dst >= nodes_.size())
        throw std::invalid_argument("add_edge: endpoint id out of range");
    const std::uint64_t e = edges_.size();
    edges_.push_back(EdgeRecord{src, dst, type, ts_ns});
    out_edges_[src].push_back(e);
    in_edges_[dst].push_back(e);
    ++version_;
    return e;
}

EntityId ProvenanceGraph::intern(const EntityRef& ref) {
    if (auto it = key_to_id_.find(ref.key); it != key_to_id_.end()) return it->second;
    return add_node(ref.key, ref.type, ref.attr);
}

bool ProvenanceGraph::ingest(const LogEvent& e) {
    if (max_ts_ns_ != INT64_MIN && e.ts_ns < max_ts_ns_ - skew_window_ns_) {
        ++dropped_events_;
        return false;
    }
    max_ts_ns_ = std::max(max_ts_ns_, e.ts_ns);

    const EntityId subj = intern(e.subject);
    const EntityId obj = intern(e.object);
    add_edge(subj, obj, e.type, e.ts_ns);
    interval_active_.insert(subj);
    interval_active_.insert(obj);
    return true;
}

ActiveSnapshot ProvenanceGraph::close_interval(const DetectionInterval& iv) {
    ActiveSnapshot snap;
    snap.interval = iv;
    snap.graph_version = version_;
    snap.active.assign(interval_active_.begin(), interval_active_.end());
    std::sort(snap.active.begin(), snap.active.end());
    interval_active_.clear();
    return snap;
}

std::optional<EntityId> ProvenanceGraph::find(std::string_view key) const {
    auto it = key_to_id_.find(std::string(key));
    if (it == key_to_id_.end()) return std::nullopt;
    return it->second;
}

SubgraphResult induced_subgraph(const ProvenanceGraph& g, std::span<const EntityId> keep) {
    SubgraphResult r;
    r.graph = ProvenanceGraph(g.skew_window_ns());
    r.to_parent.reserve(keep.size());
    for (EntityId old : keep) {
        const NodeRecord& n = g.node(old);
        const EntityId local = r.graph.add_node(n.key, n.type, n.attr);
        r.to_parent.push_back(old);
        r.to_local.emplace(old, local);
    }
    for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
        const EdgeRecord& er = g.edge(e);
        auto s = r.to_local.find(er.src);
        if (s == r.to_local.end()) continue;
        auto d = r.to_local.find(er.dst);
        if (d == r.to_local.end()) continue;
        r.graph.add_edge(s->second, d->second, er.type, er.ts_ns);
    }
    return r;
}

}  // namespace provfaas
