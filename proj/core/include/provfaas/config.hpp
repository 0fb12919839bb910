#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "provfaas/featurize.hpp"
#include "provfaas/gnn.hpp"
#include "provfaas/partition.hpp"
#include "provfaas/sim.hpp"
#include "provfaas/workload.hpp"

namespace provfaas {

// Everything a pipeline run needs, from one plain key-value config file with
// [section] headers. All randomness in a run flows from the single seed.
struct PipelineConfig {
    std::uint64_t seed = 1;

    // [provgraph]
    double interval_seconds = 15;
    unsigned k_layers = 2;
    std::uint64_t freq_threshold = 10;
    std::int64_t skew_window_ms = 5000;
    bool filter_locality = true;
    bool filter_frequency = false;
    std::string freqdb_path;

    // [featurize]
    std::size_t embed_dim = 64;
    CostModel cost;
    double unit_budget = 50;

    // [partitioner]
    std::uint64_t capacity_edges = 500;
    bool strict = false;
    FitStrategy fit = FitStrategy::BestFit;
    unsigned k_hops = 2;

    // [gnn]
    unsigned gnn_layers = 2;
    std::size_t hidden_dim = 64;
    std::size_t out_dim = 32;
    Activation activation = Activation::Relu;
    std::string model_path;

    // [detector]
    double quantile = 0.999;
    std::string profile_path;

    // [sim]
    SimConfig sim;
    double gnn_cost_per_edge = 0.02;

    // [workload]
    SyntheticSpec workload;

    double interval_ms() const { return interval_seconds * 1000.0; }
    std::int64_t interval_ns() const { return static_cast<std::int64_t>(interval_seconds * 1e9); }
    std::int64_t skew_window_ns() const { return skew_window_ms * 1'000'000; }

    UnitSplitParams split_params() const {
        return UnitSplitParams{interval_ms(), unit_budget, capacity_edges, gnn_cost_per_edge};
    }
};

// Collects every violated constraint instead of stopping at the first.
std::vector<std::string> validate_config(const PipelineConfig& cfg);

struct ConfigParseResult {
    PipelineConfig config;
    std::vector<std::string> errors;  // syntax errors, unknown keys, constraint violations
    bool ok() const { return errors.empty(); }
};

ConfigParseResult parse_config_file(const std::string& path);
ConfigParseResult parse_config_text(const std::string& text, const std::string& origin = "<string>");

}  // namespace provfaas
