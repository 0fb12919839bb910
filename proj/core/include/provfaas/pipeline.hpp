#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "provfaas/config.hpp"
#include "provfaas/detector.hpp"
#include "provfaas/gnn.hpp"
#include "provfaas/sim.hpp"

namespace provfaas {

// Setup-time failure (bad config, inconsistent model file, missing inputs
// named by the config). Distinct from runtime errors so the CLI can exit 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> details)
        : std::runtime_error(details.empty() ? "invalid configuration" : details.front()),
          details_(std::move(details)) {}
    const std::vector<std::string>& details() const { return details_; }

private:
    std::vector<std::string> details_;
};

struct IntervalReport {
    std::uint64_t interval = 0;
    std::size_t events = 0;
    std::size_t active_nodes = 0;
    std::size_t filtered_nodes = 0;
    std::size_t embed_units = 0;
    std::size_t bins = 0;
    std::size_t oversize_bins = 0;
    std::size_t alerts = 0;
    double latency_ms = 0;
};

struct AlertRecord {
    std::uint64_t interval = 0;
    std::string node_key;
    double score = 0;
    std::string attr;
};

// Everything the compute stages produce before timing is simulated.
struct PipelineArtifacts {
    std::vector<StageJob> jobs;
    std::vector<IntervalReport> intervals;
    std::vector<AlertRecord> alerts;
    std::vector<std::string> packing_reports;  // one per interval
    std::uint64_t parse_errors = 0;
    std::uint64_t dropped_events = 0;
    std::size_t graph_nodes = 0;
    std::size_t graph_edges = 0;
    BenignProfile profile;
    bool profile_fitted = false;
};

// Runs ingest -> filter -> featurize -> partition -> infer -> score over the
// whole JSONL stream, one detection interval at a time. No simulation yet.
// When embedding_dump_dir is non-empty, one PFEMB file per interval is
// written there.
PipelineArtifacts execute_stages(const PipelineConfig& cfg, std::istream& log,
                                 const std::string& embedding_dump_dir = "");

struct RunReport {
    std::vector<IntervalReport> intervals;
    SimReport sim;
    LatencyStats stats;  // meaningful only when intervals is non-empty
    std::uint64_t alert_count = 0;
    std::uint64_t parse_errors = 0;
    std::uint64_t dropped_events = 0;
    std::size_t graph_nodes = 0;
    std::size_t graph_edges = 0;
};

// Full run: compute stages plus the runtime simulation in the given mode.
// When out_dir is non-empty, writes latency.csv, summary.json, alerts.jsonl,
// packing.txt and report.json there; identical inputs give byte-identical
// files.
RunReport run_pipeline(const PipelineConfig& cfg, std::istream& log, SimMode mode,
                       const std::string& out_dir = "", bool dump_embeddings = false);

struct CompareReport {
    LatencyStats serverless;
    LatencyStats static_mode;
    double serverless_instance_s = 0;
    double static_instance_s = 0;
    double mean_reduction_pct = 0;  // how much lower the serverless mean is
    double cv_reduction_pct = 0;
    std::uint64_t intervals = 0;
};

// Serverless and static simulated on the identical workload and seed. With a
// log stream the workload comes from the pipeline stages; otherwise it is
// synthesized from cfg.workload.
CompareReport compare_modes(const PipelineConfig& cfg, std::istream* log);

std::string compare_summary_text(const CompareReport& r);

// Shared stage-job construction from pipeline outputs.
std::uint32_t embed_unit_vertical_hint(double total_cost, double unit_budget, bool oversize);

}  // namespace provfaas
