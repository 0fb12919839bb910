#include "provfaas/partition.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace provfaas {

Neighborhood khop_neighborhood(const ProvenanceGraph& g, EntityId center, unsigned k) {
    if (!g.contains(center))
        throw std::invalid_argument("khop_neighborhood: unknown center id " + std::to_string(center));

    Neighborhood nb;
    nb.center = center;
    nb.nodes = DynamicBitset(g.node_count());
    nb.edges = DynamicBitset(g.edge_count());

    nb.nodes.set(center);
    std::vector<EntityId> frontier{center};
    std::vector<EntityId> next;
    for (unsigned hop = 0; hop < k && !frontier.empty(); ++hop) {
        next.clear();
        for (EntityId v : frontier) {
            g.for_each_incident(v, [&](std::uint64_t, EntityId u) {
                if (!nb.nodes.test(u)) {
                    nb.nodes.set(u);
                    next.push_back(u);
                }
            });
        }
        frontier.swap(next);
    }

    // Induced edges: everything with both endpoints inside the ball.
    nb.nodes.for_each_set([&](std::size_t v) {
        g.for_each_incident(static_cast<EntityId>(v), [&](std::uint64_t e, EntityId u) {
            if (nb.nodes.test(u)) nb.edges.set(e);
        });
    });
    nb.edge_count = nb.edges.count();
    return nb;
}

namespace {

// Edges that become induced when nb joins the cluster. Every such edge has at
// least one endpoint among the nodes nb adds, so scanning those suffices.
std::vector<std::uint64_t> newly_induced_edges(const ClusterState& cluster, const Neighborhood& nb,
                                               const ProvenanceGraph& g) {
    std::vector<std::uint64_t> added;
    DynamicBitset seen(g.edge_count());
    nb.nodes.for_each_set([&](std::size_t v) {
        if (cluster.covered_nodes.test(v)) return;  // not a new node
        g.for_each_incident(static_cast<EntityId>(v), [&](std::uint64_t e, EntityId u) {
            if (seen.test(e) || cluster.covered_edges.test(e)) return;
            if (cluster.covered_nodes.test(u) || nb.nodes.test(u)) {
                seen.set(e);
                added.push_back(e);
            }
        });
    });
    return added;
}

ClusterState open_bin(const Neighborhood& nb, std::size_t seed_index, std::uint64_t capacity, bool strict) {
    ClusterState c;
    c.members.push_back(seed_index);
    c.covered_nodes = nb.nodes;
    c.covered_edges = nb.edges;
    c.covered_edge_count = nb.edge_count;
    c.remaining = static_cast<std::int64_t>(capacity) - static_cast<std::int64_t>(nb.edge_count);
    // A lone neighborhood that already busts the capacity (meets it, under
    // strict semantics) is served anyway, with more resources per instance.
    c.oversize = strict ? c.remaining <= 0 : c.remaining < 0;
    if (c.oversize && capacity > 0)
        c.vertical_scale = static_cast<std::uint32_t>((nb.edge_count + capacity - 1) / capacity);
    if (c.vertical_scale == 0) c.vertical_scale = 1;
    return c;
}

}  // namespace

std::uint64_t marginal_cost(const ClusterState& cluster, const Neighborhood& nb, const ProvenanceGraph& g) {
    return newly_induced_edges(cluster, nb, g).size();
}

PackingResult binpack_ffd(const ProvenanceGraph& g, const std::vector<Neighborhood>& neighborhoods,
                          std::uint64_t capacity, bool strict, FitStrategy fit,
                          const MarginalFn& marginal, const PackObserver& observer) {
    if (capacity == 0) throw std::invalid_argument("binpack_ffd: capacity must be positive");
    const MarginalFn& delta = marginal ? marginal : MarginalFn(marginal_cost);

    std::vector<std::size_t> order(neighborhoods.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (neighborhoods[a].edge_count != neighborhoods[b].edge_count)
            return neighborhoods[a].edge_count > neighborhoods[b].edge_count;
        return a < b;
    });

    PackingResult result;
    result.capacity = capacity;
    result.strict = strict;

    for (std::size_t idx : order) {
        const Neighborhood& nb = neighborhoods[idx];
        std::size_t target = result.bins.size();

        if (fit == FitStrategy::FirstFit) {
            for (std::size_t b = 0; b < result.bins.size(); ++b) {
                const std::uint64_t m = delta(result.bins[b], nb, g);
                const bool fits = strict ? static_cast<std::int64_t>(m) < result.bins[b].remaining
                                         : static_cast<std::int64_t>(m) <= result.bins[b].remaining;
                if (fits) {
                    target = b;
                    break;
                }
            }
        } else {
            std::int64_t best_slack = 0;
            for (std::size_t b = 0; b < result.bins.size(); ++b) {
                const std::uint64_t m = delta(result.bins[b], nb, g);
                const bool fits = strict ? static_cast<std::int64_t>(m) < result.bins[b].remaining
                                         : static_cast<std::int64_t>(m) <= result.bins[b].remaining;
                if (!fits) continue;
                const std::int64_t slack = result.bins[b].remaining - static_cast<std::int64_t>(m);
                if (target == result.bins.size() || slack < best_slack) {
                    target = b;
                    best_slack = slack;
                }
            }
        }

        if (target == result.bins.size()) {
            result.bins.push_back(open_bin(nb, idx, capacity, strict));
        } else {
            ClusterState& bin = result.bins[target];
            const std::uint64_t m = delta(bin, nb, g);
            for (std::uint64_t e : newly_induced_edges(bin, nb, g)) bin.covered_edges.set(e);
            bin.covered_nodes |= nb.nodes;
            bin.covered_edge_count += m;
            bin.remaining -= static_cast<std::int64_t>(m);
            bin.members.push_back(idx);
        }
        if (observer) observer(result.bins, target);
    }
    return result;
}

std::vector<PackedBin> materialize_bins(const ProvenanceGraph& g,
                                        const std::vector<Neighborhood>& neighborhoods,
                                        const PackingResult& result) {
    std::vector<PackedBin> out;
    out.reserve(result.bins.size());
    for (const ClusterState& bin : result.bins) {
        PackedBin pb;
        std::vector<EntityId> keep;
        keep.reserve(bin.covered_nodes.count());
        bin.covered_nodes.for_each_set([&](std::size_t v) { keep.push_back(v); });
        pb.sub = induced_subgraph(g, keep);
        for (std::size_t idx : bin.members) pb.seeds.push_back(neighborhoods[idx].center);
        std::sort(pb.seeds.begin(), pb.seeds.end());
        pb.edge_count = bin.covered_edge_count;
        pb.oversize = bin.oversize;
        pb.vertical_scale = bin.vertical_scale;
        out.push_back(std::move(pb));
    }
    return out;
}

std::string packing_report(const PackingResult& result) {
    std::ostringstream os;
    os << "bins=" << result.bins.size() << " capacity=" << result.capacity
       << " strict=" << (result.strict ? 1 : 0) << "\n";
    for (std::size_t b = 0; b < result.bins.size(); ++b) {
        const ClusterState& bin = result.bins[b];
        os << "bin " << b << " seeds=" << bin.members.size() << " edges=" << bin.covered_edge_count
           << " remain=" << bin.remaining << " oversize=" << (bin.oversize ? 1 : 0);
        if (bin.oversize) os << " vscale=" << bin.vertical_scale;
        os << "\n";
    }
    return os.str();
}

}  // namespace provfaas
