#include "provfaas/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "provfaas/filters.hpp"
#include "provfaas/frequency.hpp"
#include "provfaas/jsonl.hpp"
#include "provfaas/partition.hpp"
#include "provfaas/rng.hpp"
#include "provfaas/workload.hpp"

namespace provfaas {

namespace {

using ordered_json = nlohmann::ordered_json;

GnnModel prepare_model(const PipelineConfig& cfg) {
    if (!cfg.model_path.empty()) {
        GnnModel m;
        try {
            m = load_model(cfg.model_path);
        } catch (const std::exception& e) {
            throw ConfigError({std::string("gnn.model_path: ") + e.what()});
        }
        std::vector<std::string> errors;
        if (m.layer_count() != cfg.k_layers)
            errors.push_back("gnn model has " + std::to_string(m.layer_count()) +
                             " layers, config k_layers is " + std::to_string(cfg.k_layers));
        if (m.input_dim() != cfg.embed_dim)
            errors.push_back("gnn model input dim " + std::to_string(m.input_dim()) +
                             " != featurize.dim " + std::to_string(cfg.embed_dim));
        if (!errors.empty()) throw ConfigError(std::move(errors));
        return m;
    }
    std::vector<std::size_t> dims;
    dims.push_back(cfg.embed_dim);
    for (unsigned l = 1; l < cfg.k_layers; ++l) dims.push_back(cfg.hidden_dim);
    dims.push_back(cfg.out_dim);
    return synth_model(derive_seed(cfg.seed, "gnn-model"), dims, cfg.activation);
}

std::vector<EntityId> all_nodes(const ProvenanceGraph& g) {
    std::vector<EntityId> v(g.node_count());
    for (EntityId i = 0; i < g.node_count(); ++i) v[i] = i;
    return v;
}

std::string format_ms(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

struct StageContext {
    const PipelineConfig& cfg;
    const GnnModel& model;
    const FrequencyDb* freqdb;
    PipelineArtifacts& out;
    std::string dump_dir;
};

void process_interval(StageContext& ctx, ProvenanceGraph& g, const DetectionInterval& iv,
                      std::size_t events_in_interval) {
    const PipelineConfig& cfg = ctx.cfg;
    const ActiveSnapshot snap = g.close_interval(iv);

    IntervalReport row;
    row.interval = iv.index;
    row.events = events_in_interval;
    row.active_nodes = snap.active.size();

    // Detection-relevant node set: intersection of the enabled filters; a
    // disabled filter imposes no restriction.
    std::vector<EntityId> relevant = cfg.filter_locality
                                         ? locality_filter(g, snap.active, cfg.k_layers)
                                         : all_nodes(g);
    if (cfg.filter_frequency) {
        const std::vector<EntityId> rare = frequency_filter(g, *ctx.freqdb, cfg.k_layers);
        std::vector<EntityId> both;
        std::set_intersection(relevant.begin(), relevant.end(), rare.begin(), rare.end(),
                              std::back_inserter(both));
        relevant = std::move(both);
    }
    row.filtered_nodes = relevant.size();

    StageJob embed_job{iv.index, Stage::Embed, (static_cast<double>(iv.index) + 1.0) * cfg.interval_ms(), {}};
    StageJob gnn_job{iv.index, Stage::Gnn, embed_job.arrival_ms, {}};
    std::ostringstream packing;
    packing << "interval " << iv.index << "\n";

    if (!relevant.empty()) {
        const SubgraphResult sub = induced_subgraph(g, relevant);

        std::vector<std::pair<EntityId, std::string>> nodes;
        nodes.reserve(sub.graph.node_count());
        for (EntityId v = 0; v < sub.graph.node_count(); ++v)
            nodes.emplace_back(v, sub.graph.node(v).attr);
        EmbeddingStageResult stage =
            run_embedding_stage(nodes, cfg.unit_budget, cfg.embed_dim, cfg.cost);
        row.embed_units = stage.units.size();

        if (!ctx.dump_dir.empty()) {
            std::map<EntityId, FeatureVector> by_parent;
            for (const auto& [local, vec] : stage.vectors)
                by_parent.emplace(sub.to_parent[local], vec);
            char name[64];
            std::snprintf(name, sizeof name, "embeddings_%06llu.pfemb",
                          static_cast<unsigned long long>(iv.index));
            write_embedding_dump(ctx.dump_dir + "/" + name, by_parent, cfg.embed_dim);
        }

        std::vector<Neighborhood> nbs;
        nbs.reserve(sub.graph.node_count());
        for (EntityId v = 0; v < sub.graph.node_count(); ++v)
            nbs.push_back(khop_neighborhood(sub.graph, v, cfg.k_hops));

        const PackingResult packed =
            binpack_ffd(sub.graph, nbs, cfg.capacity_edges, cfg.strict, cfg.fit);
        const std::vector<PackedBin> bins = materialize_bins(sub.graph, nbs, packed);
        row.bins = bins.size();
        row.oversize_bins = packed.oversize_bins();
        packing << packing_report(packed);

        const std::map<EntityId, FeatureVector> final_emb =
            run_inference_stage(bins, stage.vectors, ctx.model);

        if (!ctx.out.profile_fitted && !final_emb.empty()) {
            std::vector<FeatureVector> benign;
            benign.reserve(final_emb.size());
            for (const auto& [_, v] : final_emb) benign.push_back(v);
            ctx.out.profile = fit_profile(benign, cfg.quantile);
            ctx.out.profile_fitted = true;
        }
        if (ctx.out.profile_fitted) {
            const ScoreResult scored = score_embeddings(final_emb, ctx.out.profile);
            row.alerts = scored.alerts.size();
            for (const NodeScore& a : scored.alerts) {
                const NodeRecord& n = g.node(sub.to_parent[a.node]);
                ctx.out.alerts.push_back(AlertRecord{iv.index, n.key, a.score, n.attr});
            }
        }

        for (const ExecutionUnit& u : stage.units)
            embed_job.units.push_back(
                SimUnit{u.total_cost, embed_unit_vertical_hint(u.total_cost, cfg.unit_budget, u.oversize)});
        for (const PackedBin& b : bins)
            gnn_job.units.push_back(SimUnit{static_cast<double>(b.edge_count) * cfg.gnn_cost_per_edge,
                                            b.vertical_scale});
    }

    ctx.out.packing_reports.push_back(packing.str());
    ctx.out.jobs.push_back(std::move(embed_job));
    ctx.out.jobs.push_back(std::move(gnn_job));
    ctx.out.intervals.push_back(row);
}

}  // namespace

std::uint32_t embed_unit_vertical_hint(double total_cost, double unit_budget, bool oversize) {
    if (!oversize || unit_budget <= 0) return 1;
    return static_cast<std::uint32_t>(std::max(1.0, std::ceil(total_cost / unit_budget)));
}

PipelineArtifacts execute_stages(const PipelineConfig& cfg, std::istream& log,
                                 const std::string& embedding_dump_dir) {
    if (auto errors = validate_config(cfg); !errors.empty()) throw ConfigError(std::move(errors));

    const GnnModel model = prepare_model(cfg);

    FrequencyDb freqdb(cfg.freq_threshold);
    if (cfg.filter_frequency) {
        try {
            freqdb = FrequencyDb::load(cfg.freqdb_path);
        } catch (const std::exception& e) {
            throw ConfigError({std::string("provgraph.freqdb_path: ") + e.what()});
        }
    }

    PipelineArtifacts out;
    if (!cfg.profile_path.empty()) {
        try {
            out.profile = load_profile(cfg.profile_path);
        } catch (const std::exception& e) {
            throw ConfigError({std::string("detector.profile_path: ") + e.what()});
        }
        if (out.profile.centroid.size() != cfg.out_dim)
            throw ConfigError({"detector profile dim " + std::to_string(out.profile.centroid.size()) +
                               " != gnn.out_dim " + std::to_string(cfg.out_dim)});
        out.profile_fitted = true;
    }

    StageContext ctx{cfg, model, &freqdb, out, embedding_dump_dir};

    ProvenanceGraph g(cfg.skew_window_ns());
    const std::int64_t span = cfg.interval_ns();
    bool started = false;
    DetectionInterval iv;
    std::size_t events_in_interval = 0;

    const StreamStats stream = for_each_event(
        log,
        [&](const LogEvent& e) {
            if (!started) {
                started = true;
                const std::int64_t t0 = (e.ts_ns / span) * span;  // align to the interval grid
                iv = DetectionInterval{t0, t0 + span, 0};
            }
            while (e.ts_ns >= iv.end_ns) {
                process_interval(ctx, g, iv, events_in_interval);
                events_in_interval = 0;
                iv = DetectionInterval{iv.end_ns, iv.end_ns + span, iv.index + 1};
            }
            if (g.ingest(e)) ++events_in_interval;
        },
        [&](std::size_t lineno, const std::string& message) {
            std::fprintf(stderr, "line %zu: rejected event: %s\n", lineno, message.c_str());
        });

    if (started) process_interval(ctx, g, iv, events_in_interval);

    out.parse_errors = stream.parse_errors;
    out.dropped_events = g.dropped_events();
    out.graph_nodes = g.node_count();
    out.graph_edges = g.edge_count();
    return out;
}

RunReport run_pipeline(const PipelineConfig& cfg, std::istream& log, SimMode mode,
                       const std::string& out_dir, bool dump_embeddings) {
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    PipelineArtifacts art =
        execute_stages(cfg, log, dump_embeddings && !out_dir.empty() ? out_dir : std::string());

    SimConfig simcfg = cfg.sim;
    simcfg.mode = mode;
    const SimReport sim = simulate(art.jobs, simcfg);

    RunReport report;
    report.intervals = art.intervals;
    for (const LatencySample& s : sim.trace.samples)
        for (IntervalReport& row : report.intervals)
            if (row.interval == s.interval) row.latency_ms = s.latency_ms;
    report.sim = sim;
    if (!sim.trace.samples.empty()) report.stats = latency_stats(sim.trace);
    report.alert_count = art.alerts.size();
    report.parse_errors = art.parse_errors;
    report.dropped_events = art.dropped_events;
    report.graph_nodes = art.graph_nodes;
    report.graph_edges = art.graph_edges;

    if (!out_dir.empty()) {
        {
            std::ofstream os(out_dir + "/latency.csv");
            os << "interval,latency_ms\n";
            for (const IntervalReport& row : report.intervals)
                os << row.interval << ',' << format_ms(row.latency_ms) << '\n';
        }
        {
            ordered_json j;
            j["intervals"] = report.intervals.size();
            j["mean"] = report.stats.mean;
            j["std"] = report.stats.stddev;
            j["cv"] = report.stats.cv;
            j["p50"] = report.stats.p50;
            j["p95"] = report.stats.p95;
            j["p99"] = report.stats.p99;
            j["instance_seconds"] = sim.instance_ms / 1000.0;
            j["peak_instances"] = sim.peak_instances;
            j["cold_starts"] = sim.cold_starts;
            j["alerts"] = report.alert_count;
            j["dropped_events"] = report.dropped_events;
            std::ofstream os(out_dir + "/summary.json");
            os << j.dump(2) << '\n';
        }
        {
            std::ofstream os(out_dir + "/alerts.jsonl");
            for (const AlertRecord& a : art.alerts) {
                ordered_json j;
                j["interval"] = a.interval;
                j["node_key"] = a.node_key;
                j["score"] = a.score;
                j["attr"] = a.attr;
                os << j.dump() << '\n';
            }
        }
        {
            std::ofstream os(out_dir + "/packing.txt");
            for (const std::string& p : art.packing_reports) os << p;
        }
        {
            ordered_json rows = ordered_json::array();
            for (const IntervalReport& row : report.intervals) {
                ordered_json r;
                r["interval"] = row.interval;
                r["events"] = row.events;
                r["active_nodes"] = row.active_nodes;
                r["filtered_nodes"] = row.filtered_nodes;
                r["embed_units"] = row.embed_units;
                r["bins"] = row.bins;
                r["oversize_bins"] = row.oversize_bins;
                r["alerts"] = row.alerts;
                r["latency_ms"] = row.latency_ms;
                rows.push_back(std::move(r));
            }
            ordered_json j;
            j["graph_nodes"] = report.graph_nodes;
            j["graph_edges"] = report.graph_edges;
            j["dropped_events"] = report.dropped_events;
            j["intervals"] = std::move(rows);
            std::ofstream os(out_dir + "/report.json");
            os << j.dump(2) << '\n';
        }
    }
    return report;
}

CompareReport compare_modes(const PipelineConfig& cfg, std::istream* log) {
    std::vector<StageJob> jobs;
    std::uint64_t intervals = 0;
    if (log) {
        PipelineArtifacts art = execute_stages(cfg, *log);
        jobs = std::move(art.jobs);
        intervals = art.intervals.size();
    } else {
        jobs = generate_workload(cfg.workload, cfg.split_params(), cfg.seed);
        intervals = cfg.workload.intervals;
    }

    SimConfig serverless = cfg.sim;
    serverless.mode = SimMode::Serverless;
    SimConfig fixed = cfg.sim;
    fixed.mode = SimMode::Static;

    const SimReport a = simulate(jobs, serverless);
    const SimReport b = simulate(jobs, fixed);

    CompareReport r;
    r.intervals = intervals;
    r.serverless = latency_stats(a.trace);
    r.static_mode = latency_stats(b.trace);
    r.serverless_instance_s = a.instance_ms / 1000.0;
    r.static_instance_s = b.instance_ms / 1000.0;
    r.mean_reduction_pct = 100.0 * (1.0 - r.serverless.mean / r.static_mode.mean);
    r.cv_reduction_pct = 100.0 * (1.0 - r.serverless.cv / r.static_mode.cv);
    return r;
}

std::string compare_summary_text(const CompareReport& r) {
    char buf[256];
    std::ostringstream os;
    os << "intervals: " << r.intervals << "\n";
    auto line = [&](const char* name, const LatencyStats& s, double instance_s) {
        std::snprintf(buf, sizeof buf,
                      "%s: mean_ms=%.6f std_ms=%.6f cv=%.6f p50_ms=%.6f p95_ms=%.6f p99_ms=%.6f "
                      "instance_s=%.3f\n",
                      name, s.mean, s.stddev, s.cv, s.p50, s.p95, s.p99, instance_s);
        os << buf;
    };
    line("serverless", r.serverless, r.serverless_instance_s);
    line("static", r.static_mode, r.static_instance_s);
    std::snprintf(buf, sizeof buf, "reduction: mean=%.2f%% cv=%.2f%%\n", r.mean_reduction_pct,
                  r.cv_reduction_pct);
    os << buf;
    return os.str();
}

}  // namespace provfaas
