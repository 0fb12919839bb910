#include "provfaas/oracle/reference.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace provfaas::oracle {

std::vector<EntityId> bfs_ball(const ProvenanceGraph& g, std::span<const EntityId> seeds, unsigned depth) {
    // Own adjacency, rebuilt from the raw edge table.
    std::vector<std::vector<EntityId>> adj(g.node_count());
    for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
        const EdgeRecord& er = g.edge(e);
        adj[er.src].push_back(er.dst);
        adj[er.dst].push_back(er.src);
    }

    std::set<EntityId> reached(seeds.begin(), seeds.end());
    std::set<EntityId> frontier = reached;
    for (unsigned hop = 0; hop < depth && !frontier.empty(); ++hop) {
        std::set<EntityId> next;
        for (EntityId v : frontier)
            for (EntityId u : adj[v])
                if (!reached.contains(u)) next.insert(u);
        reached.insert(next.begin(), next.end());
        frontier = std::move(next);
    }
    return {reached.begin(), reached.end()};
}

std::uint64_t recount_induced_edges(const ProvenanceGraph& g, const DynamicBitset& nodes) {
    std::uint64_t n = 0;
    for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
        const EdgeRecord& er = g.edge(e);
        if (nodes.test(er.src) && nodes.test(er.dst)) ++n;
    }
    return n;
}

namespace {

bool block_feasible(const ProvenanceGraph& g, const std::vector<Neighborhood>& nbs,
                    const std::vector<std::size_t>& block, std::uint64_t capacity, bool strict) {
    if (block.size() == 1) return true;  // a lone neighborhood always gets a bin
    DynamicBitset u(g.node_count());
    for (std::size_t i : block) u |= nbs[i].nodes;
    const std::uint64_t edges = recount_induced_edges(g, u);
    return strict ? edges < capacity : edges <= capacity;
}

}  // namespace

std::size_t optimal_bin_count(const ProvenanceGraph& g, const std::vector<Neighborhood>& nbs,
                              std::uint64_t capacity, bool strict) {
    const std::size_t n = nbs.size();
    if (n == 0) return 0;

    // Enumerate set partitions via restricted growth strings.
    std::vector<std::size_t> rgs(n, 0);
    std::size_t best = n;
    while (true) {
        std::size_t blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
        if (blocks < best) {
            std::vector<std::vector<std::size_t>> part(blocks);
            for (std::size_t i = 0; i < n; ++i) part[rgs[i]].push_back(i);
            bool ok = true;
            for (const auto& block : part)
                if (!block_feasible(g, nbs, block, capacity, strict)) {
                    ok = false;
                    break;
                }
            if (ok) best = blocks;
        }

        // Next restricted growth string.
        std::size_t i = n;
        while (i-- > 1) {
            std::size_t prefix_max = 0;
            for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[j]);
            if (rgs[i] <= prefix_max) {
                ++rgs[i];
                std::fill(rgs.begin() + static_cast<std::ptrdiff_t>(i) + 1, rgs.end(), 0);
                break;
            }
            if (i == 1) return best;
        }
        if (n == 1) return best;
    }
}

std::map<EntityId, FeatureVector> dense_forward(const ProvenanceGraph& g,
                                                const std::map<EntityId, FeatureVector>& init,
                                                const GnnModel& model) {
    const std::size_t n = g.node_count();

    // Undirected simple-graph adjacency matrix.
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
        const EdgeRecord& er = g.edge(e);
        adj[er.src][er.dst] = true;
        adj[er.dst][er.src] = true;
    }

    std::vector<std::vector<double>> h(n);
    for (EntityId v = 0; v < n; ++v) {
        const FeatureVector& fv = init.at(v);
        h[v].assign(fv.begin(), fv.end());
    }

    for (const GnnLayer& layer : model.layers) {
        const std::size_t din = layer.in_dim;
        const std::size_t dout = layer.out_dim;
        std::vector<std::vector<double>> next(n, std::vector<double>(dout, 0.0));
        for (EntityId v = 0; v < n; ++v) {
            std::vector<double> mean(din, 0.0);
            std::size_t deg = 0;
            for (EntityId u = 0; u < n; ++u)
                if (adj[v][u]) {
                    ++deg;
                    for (std::size_t j = 0; j < din; ++j) mean[j] += h[u][j];
                }
            if (deg)
                for (std::size_t j = 0; j < din; ++j) mean[j] /= static_cast<double>(deg);
            for (std::size_t i = 0; i < dout; ++i) {
                double z = layer.bias[i];
                for (std::size_t j = 0; j < din; ++j) z += layer.weight[i * 2 * din + j] * h[v][j];
                for (std::size_t j = 0; j < din; ++j) z += layer.weight[i * 2 * din + din + j] * mean[j];
                next[v][i] = model.activation == Activation::Relu ? (z > 0 ? z : 0) : std::tanh(z);
            }
        }
        h = std::move(next);
    }

    std::map<EntityId, FeatureVector> out;
    for (EntityId v = 0; v < n; ++v) out.emplace(v, FeatureVector(h[v].begin(), h[v].end()));
    return out;
}

StreamingStats welford(std::span<const double> samples) {
    double mean = 0, m2 = 0;
    std::size_t count = 0;
    for (double x : samples) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
    StreamingStats s;
    s.mean = mean;
    s.stddev = count ? std::sqrt(m2 / static_cast<double>(count)) : 0;
    return s;
}

ProvenanceGraph random_graph(SplitMix64& rng, std::size_t nodes, double avg_degree) {
    ProvenanceGraph g;
    std::int64_t ts = 1'000'000'000;
    const auto event_types = static_cast<std::uint64_t>(10);
    const std::uint64_t edges =
        nodes == 0 ? 0 : static_cast<std::uint64_t>(static_cast<double>(nodes) * avg_degree);

    auto entity = [&](std::uint64_t i) {
        EntityRef r;
        r.key = "n" + std::to_string(i);
        r.type = static_cast<EntityType>(i % 5);
        r.attr = "/synth/path/" + std::to_string(i % 17) + "/" + std::to_string(i);
        return r;
    };

    // Touch every node once so node count is exactly `nodes`.
    for (std::uint64_t i = 0; i < nodes; ++i) {
        LogEvent e;
        e.ts_ns = ts += 1000;
        e.type = static_cast<EventType>(rng.next_below(event_types));
        e.subject = entity(i);
        e.object = entity(rng.next_below(nodes));
        g.ingest(e);
    }
    for (std::uint64_t i = nodes; i < edges; ++i) {
        LogEvent e;
        e.ts_ns = ts += 1000;
        e.type = static_cast<EventType>(rng.next_below(event_types));
        e.subject = entity(rng.next_below(nodes));
        e.object = entity(rng.next_below(nodes));
        g.ingest(e);
    }
    return g;
}

}  // namespace provfaas::oracle
