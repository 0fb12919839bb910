#include "provfaas/workload.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "provfaas/rng.hpp"

namespace provfaas {

std::vector<std::string> SyntheticSpec::validate() const {
    std::vector<std::string> errors;
    if (intervals == 0) errors.push_back("workload.intervals must be positive");
    if (base_nodes <= 0) errors.push_back("workload.base_nodes must be positive");
    if (attr_len_mean <= 0) errors.push_back("workload.attr_len_mean must be positive");
    if (edges_per_node < 0) errors.push_back("workload.edges_per_node must be >= 0");
    if (burst_multiplier < 1) errors.push_back("workload.burst_multiplier must be >= 1");
    if (burst_every == 0 && burst_len > 0) errors.push_back("workload.burst_every must be positive");
    return errors;
}

namespace {

// Deterministic Poisson draw: Knuth for small rates, rounded normal
// approximation (Box-Muller on splitmix uniforms) for large ones.
std::uint64_t poisson_draw(SplitMix64& rng, double lambda) {
    if (lambda <= 0) return 0;
    if (lambda < 30.0) {
        const double limit = std::exp(-lambda);
        double p = 1.0;
        std::uint64_t k = 0;
        do {
            ++k;
            p *= rng.next_double();
        } while (p > limit);
        return k - 1;
    }
    double u1 = rng.next_double();
    if (u1 <= 0) u1 = 0x1.0p-53;
    const double u2 = rng.next_double();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    const double n = std::round(lambda + std::sqrt(lambda) * z);
    return n < 0 ? 0 : static_cast<std::uint64_t>(n);
}

}  // namespace

std::vector<IntervalLoad> synth_interval_loads(const SyntheticSpec& spec, std::uint64_t seed,
                                               const CostModel& cost) {
    if (auto errors = spec.validate(); !errors.empty())
        throw std::invalid_argument("synth_interval_loads: " + errors.front());

    SplitMix64 rng(derive_seed(seed, "workload"));
    std::vector<IntervalLoad> loads;
    loads.reserve(spec.intervals);
    for (std::uint64_t i = 0; i < spec.intervals; ++i) {
        const double mult = spec.bursty(i) ? spec.burst_multiplier : 1.0;
        const double lambda = spec.base_nodes * mult;
        const std::uint64_t nodes =
            spec.poisson ? poisson_draw(rng, lambda) : static_cast<std::uint64_t>(std::llround(lambda));

        IntervalLoad load;
        load.interval = i;
        for (std::uint64_t n = 0; n < nodes; ++n) {
            // Skewed length distribution with mean attr_len_mean: most
            // attributes short, a tail up to 2.2x the mean. Exact mode pins
            // the length so flat specs produce exactly flat loads.
            double len = spec.attr_len_mean;
            if (spec.poisson) {
                const double u = rng.next_double();
                len = std::max(1.0, std::round(spec.attr_len_mean * (0.4 + 1.8 * u * u)));
            }
            load.embed_cost_total += cost(static_cast<std::size_t>(len));
        }
        load.gnn_edges_total = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(nodes) * spec.edges_per_node));
        loads.push_back(load);
    }
    return loads;
}

std::vector<StageJob> jobs_from_loads(const std::vector<IntervalLoad>& loads, const UnitSplitParams& split) {
    if (split.embed_unit_budget <= 0 || split.gnn_capacity_edges == 0 || split.interval_ms <= 0)
        throw std::invalid_argument("jobs_from_loads: invalid split parameters");

    std::vector<StageJob> jobs;
    jobs.reserve(loads.size() * 2);
    for (const IntervalLoad& load : loads) {
        const double arrival = (static_cast<double>(load.interval) + 1.0) * split.interval_ms;

        StageJob embed;
        embed.interval = load.interval;
        embed.stage = Stage::Embed;
        embed.arrival_ms = arrival;
        double rest = load.embed_cost_total;
        while (rest > 1e-9) {
            const double c = std::min(rest, split.embed_unit_budget);
            embed.units.push_back(SimUnit{c, 1});
            rest -= c;
        }

        StageJob gnn;
        gnn.interval = load.interval;
        gnn.stage = Stage::Gnn;
        gnn.arrival_ms = arrival;
        std::uint64_t edges = load.gnn_edges_total;
        while (edges > 0) {
            const std::uint64_t chunk = std::min<std::uint64_t>(edges, split.gnn_capacity_edges);
            gnn.units.push_back(SimUnit{static_cast<double>(chunk) * split.gnn_cost_per_edge, 1});
            edges -= chunk;
        }

        jobs.push_back(std::move(embed));
        jobs.push_back(std::move(gnn));
    }
    return jobs;
}

void write_replay_csv(const std::string& path, const std::vector<IntervalLoad>& loads) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open replay file for writing: " + path);
    os << "interval,units_embed_cost_total,units_gnn_edges_total\n";
    char buf[64];
    for (const IntervalLoad& l : loads) {
        std::snprintf(buf, sizeof buf, "%.6f", l.embed_cost_total);
        os << l.interval << ',' << buf << ',' << l.gnn_edges_total << '\n';
    }
}

std::vector<IntervalLoad> read_replay_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open replay file: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "interval,units_embed_cost_total,units_gnn_edges_total")
        throw std::runtime_error("replay file: bad or missing header in " + path);

    std::vector<IntervalLoad> loads;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        IntervalLoad l;
        std::istringstream ls(line);
        char c1 = 0, c2 = 0;
        if (!(ls >> l.interval >> c1 >> l.embed_cost_total >> c2 >> l.gnn_edges_total) || c1 != ',' ||
            c2 != ',' || l.embed_cost_total < 0)
            throw std::runtime_error("replay file line " + std::to_string(lineno) + ": malformed row");
        loads.push_back(l);
    }
    return loads;
}

}  // namespace provfaas
