#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace provfaas {

enum class SimMode : std::uint8_t { Serverless, Static };

struct SimConfig {
    double cold_start_ms = 500;      // delay before a launched instance can serve
    double per_cost_ms = 100;        // service time per cost unit on a 1x instance
    std::uint32_t max_instances = 32;
    double scale_target = 2.0;       // target queued units per instance
    double idle_timeout_ms = 10000;  // idle time before an instance is retired
    double vertical_efficiency = 0.8;  // v-times resources -> service / (eff * v)
    SimMode mode = SimMode::Serverless;
    std::uint32_t static_instances = 2;  // pool size in Static mode
    std::uint64_t rng_seed = 1;          // consumed by workload generation, not the loop

    std::vector<std::string> validate() const;
};

enum class Stage : std::uint8_t { Embed, Gnn };

// Scheduling view of an execution unit: its abstract cost and the
// vertical-scale hint carried over from packing (1 = normal instance).
struct SimUnit {
    double cost = 0;
    std::uint32_t vertical_scale = 1;
};

// All units of one pipeline stage of one detection interval. The Gnn stage
// of an interval is released only when its Embed stage has fully completed.
struct StageJob {
    std::uint64_t interval = 0;
    Stage stage = Stage::Embed;
    double arrival_ms = 0;
    std::vector<SimUnit> units;
};

struct LatencySample {
    std::uint64_t interval = 0;
    double latency_ms = 0;  // Gnn-stage completion minus Embed-stage arrival
};

struct LatencyTrace {
    std::vector<LatencySample> samples;
};

struct LatencyStats {
    double mean = 0;
    double stddev = 0;  // population
    double cv = 0;      // stddev / mean
    double p50 = 0, p95 = 0, p99 = 0;
};

// Population statistics plus nearest-rank percentiles. Throws on an empty
// sample set or a zero mean (cv undefined).
LatencyStats latency_stats(std::span<const double> samples);
LatencyStats latency_stats(const LatencyTrace& trace);

struct SimDebugSample {
    double time_ms = 0;
    std::size_t queued = 0;
    std::size_t idle = 0;
    std::size_t alive = 0;
};

struct SimReport {
    LatencyTrace trace;
    double instance_ms = 0;  // summed instance lifetime (the billing proxy)
    std::uint32_t peak_instances = 0;
    std::uint64_t cold_starts = 0;  // launches after the initial pool
    std::uint64_t units_completed = 0;
    double makespan_ms = 0;
    std::vector<SimDebugSample> debug;  // filled only when requested
};

// Deterministic discrete-event simulation of the serverless platform (or the
// statically provisioned baseline) executing the workload. Identical
// (workload, cfg) inputs produce identical reports, byte for byte.
SimReport simulate(const std::vector<StageJob>& workload, const SimConfig& cfg,
                   bool record_debug = false);

}  // namespace provfaas
