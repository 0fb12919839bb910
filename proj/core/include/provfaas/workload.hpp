#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "provfaas/featurize.hpp"
#include "provfaas/sim.hpp"

namespace provfaas {

// Synthetic load shape: a flat base rate of nodes per interval with periodic
// burst episodes, mirroring the bursty fluctuation of detection workloads.
struct SyntheticSpec {
    std::uint64_t intervals = 240;
    double base_nodes = 40;        // mean nodes per interval
    bool poisson = true;           // false: exact counts, no sampling noise
    double attr_len_mean = 30;     // mean attribute length in characters
    double edges_per_node = 3.0;
    std::uint64_t burst_start = 60;
    std::uint64_t burst_every = 60;  // period of burst episodes
    std::uint64_t burst_len = 6;     // intervals per episode
    double burst_multiplier = 12;    // load factor during an episode

    bool bursty(std::uint64_t interval) const {
        if (burst_multiplier <= 1.0 || burst_len == 0 || interval < burst_start) return false;
        return (interval - burst_start) % std::max<std::uint64_t>(burst_every, 1) < burst_len;
    }

    std::vector<std::string> validate() const;
};

struct IntervalLoad {
    std::uint64_t interval = 0;
    double embed_cost_total = 0;
    std::uint64_t gnn_edges_total = 0;
};

// Deterministic given (spec, seed).
std::vector<IntervalLoad> synth_interval_loads(const SyntheticSpec& spec, std::uint64_t seed,
                                               const CostModel& cost = {});

// How interval load totals are cut into dispatchable units.
struct UnitSplitParams {
    double interval_ms = 15000;      // release spacing; interval i arrives at (i+1)*interval_ms
    double embed_unit_budget = 50;   // cost units per embedding unit
    std::uint64_t gnn_capacity_edges = 500;
    double gnn_cost_per_edge = 0.02;  // converts an edge budget into cost units
};

std::vector<StageJob> jobs_from_loads(const std::vector<IntervalLoad>& loads, const UnitSplitParams& split);

inline std::vector<StageJob> generate_workload(const SyntheticSpec& spec, const UnitSplitParams& split,
                                               std::uint64_t seed) {
    return jobs_from_loads(synth_interval_loads(spec, seed), split);
}

// Replay file: CSV header "interval,units_embed_cost_total,units_gnn_edges_total".
void write_replay_csv(const std::string& path, const std::vector<IntervalLoad>& loads);
std::vector<IntervalLoad> read_replay_csv(const std::string& path);  // throws naming the bad line

}  // namespace provfaas
