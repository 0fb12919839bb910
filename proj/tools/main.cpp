// provfaas: provenance-graph anomaly detection with a simulated serverless
// runtime. Subcommands: run, compare, oracle, gen-workload, fit-profile,
// build-freqdb. Exit codes: 0 success, 1 runtime error, 2 config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "provfaas/config.hpp"
#include "provfaas/frequency.hpp"
#include "provfaas/jsonl.hpp"
#include "provfaas/oracle/checks.hpp"
#include "provfaas/pipeline.hpp"
#include "provfaas/workload.hpp"

namespace {

using namespace provfaas;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

PipelineConfig load_config_or_throw(const std::string& path, std::optional<std::uint64_t> seed_override) {
    ConfigParseResult parsed = parse_config_file(path);
    if (!parsed.ok()) throw ConfigError(std::move(parsed.errors));
    if (seed_override) {
        parsed.config.seed = *seed_override;
        parsed.config.sim.rng_seed = *seed_override;
    }
    return parsed.config;
}

// "-" means stdin.
std::istream& open_log(const std::string& path, std::ifstream& file) {
    if (path == "-") return std::cin;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open log file: " + path);
    return file;
}

void print_run_summary(const RunReport& r) {
    std::printf("intervals: %zu\n", r.intervals.size());
    std::printf("graph: nodes=%zu edges=%zu dropped=%llu parse_errors=%llu\n", r.graph_nodes,
                r.graph_edges, static_cast<unsigned long long>(r.dropped_events),
                static_cast<unsigned long long>(r.parse_errors));
    std::printf("alerts: %llu\n", static_cast<unsigned long long>(r.alert_count));
    if (!r.intervals.empty()) {
        std::printf("latency: mean_ms=%.6f std_ms=%.6f cv=%.6f p50_ms=%.6f p95_ms=%.6f p99_ms=%.6f\n",
                    r.stats.mean, r.stats.stddev, r.stats.cv, r.stats.p50, r.stats.p95, r.stats.p99);
        std::printf("sim: instance_s=%.3f peak_instances=%u cold_starts=%llu\n",
                    r.sim.instance_ms / 1000.0, r.sim.peak_instances,
                    static_cast<unsigned long long>(r.sim.cold_starts));
    }
}

int report_check(const oracle::CheckResult& c) {
    if (c.ok()) {
        std::printf("[PASS] %s runs=%llu\n", c.name.c_str(), static_cast<unsigned long long>(c.runs));
        return kExitOk;
    }
    std::printf("[FAIL] %s runs=%llu failures=%zu first_failing_seed=%llu\n", c.name.c_str(),
                static_cast<unsigned long long>(c.runs), c.failing_seeds.size(),
                static_cast<unsigned long long>(c.failing_seeds.front()));
    return kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"provenance-graph anomaly detection pipeline on a simulated serverless runtime"};
    app.require_subcommand(1);

    std::string config_path, log_path = "-", out_dir, out_path, mode_name = "serverless";
    std::optional<std::uint64_t> seed_override;
    bool dump_embeddings = false;
    std::uint64_t oracle_runs = 100, oracle_base_seed = 1;
    std::size_t oracle_nodes = 500, oracle_max_nodes = 2000;
    std::uint64_t freq_threshold = 10;

    auto* run = app.add_subcommand("run", "execute the full per-interval detection pipeline");
    run->add_option("--config", config_path, "pipeline config file")->required();
    run->add_option("--log", log_path, "JSONL event log ('-' for stdin)");
    run->add_option("--mode", mode_name, "runtime mode")->check(CLI::IsMember({"serverless", "static"}));
    run->add_option("--seed", seed_override, "override the config seed");
    run->add_option("--out-dir", out_dir, "directory for latency.csv, summary.json, alerts.jsonl, ...");
    run->add_flag("--dump-embeddings", dump_embeddings, "write per-interval PFEMB embedding dumps");

    auto* compare = app.add_subcommand("compare", "run serverless and static on the identical workload");
    compare->add_option("--config", config_path, "pipeline config file")->required();
    std::string compare_log;
    compare->add_option("--log", compare_log, "JSONL event log (omit to use the synthetic workload)");
    compare->add_option("--seed", seed_override, "override the config seed");

    auto* genwl = app.add_subcommand("gen-workload", "write the synthetic workload as a replay CSV");
    genwl->add_option("--config", config_path, "pipeline config file")->required();
    genwl->add_option("--out", out_path, "output replay CSV path")->required();
    genwl->add_option("--seed", seed_override, "override the config seed");

    auto* fitp = app.add_subcommand("fit-profile", "fit the benign profile from a benign log");
    fitp->add_option("--config", config_path, "pipeline config file")->required();
    fitp->add_option("--log", log_path, "benign JSONL event log ('-' for stdin)");
    fitp->add_option("--out", out_path, "output profile path")->required();
    fitp->add_option("--seed", seed_override, "override the config seed");

    auto* freqdb = app.add_subcommand("build-freqdb", "count edge signatures over a training log");
    freqdb->add_option("--log", log_path, "training JSONL event log ('-' for stdin)");
    freqdb->add_option("--threshold", freq_threshold, "rare-signature threshold (count <= threshold)");
    freqdb->add_option("--out", out_path, "output frequency db path")->required();

    auto* orc = app.add_subcommand("oracle", "randomized cross-checks against reference implementations");
    orc->require_subcommand(1);
    for (const char* name : {"locality", "packing", "gnn-equivalence", "stats", "featurize", "all"}) {
        auto* sub = orc->add_subcommand(name);
        sub->add_option("--seeds", oracle_runs, "number of seeded instances");
        sub->add_option("--seed", oracle_base_seed, "base seed");
        sub->add_option("--nodes", oracle_nodes, "graph size for gnn-equivalence/featurize");
        sub->add_option("--max-nodes", oracle_max_nodes, "max graph size for locality/packing");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const PipelineConfig cfg = load_config_or_throw(config_path, seed_override);
            std::ifstream file;
            std::istream& log = open_log(log_path, file);
            const SimMode mode = mode_name == "static" ? SimMode::Static : SimMode::Serverless;
            const RunReport report = run_pipeline(cfg, log, mode, out_dir, dump_embeddings);
            print_run_summary(report);
            return kExitOk;
        }

        if (compare->parsed()) {
            const PipelineConfig cfg = load_config_or_throw(config_path, seed_override);
            CompareReport report;
            if (compare_log.empty()) {
                report = compare_modes(cfg, nullptr);
            } else {
                std::ifstream file;
                std::istream& log = open_log(compare_log, file);
                report = compare_modes(cfg, &log);
            }
            std::fputs(compare_summary_text(report).c_str(), stdout);
            return kExitOk;
        }

        if (genwl->parsed()) {
            const PipelineConfig cfg = load_config_or_throw(config_path, seed_override);
            write_replay_csv(out_path, synth_interval_loads(cfg.workload, cfg.seed, cfg.cost));
            std::printf("wrote %s\n", out_path.c_str());
            return kExitOk;
        }

        if (fitp->parsed()) {
            PipelineConfig cfg = load_config_or_throw(config_path, seed_override);
            cfg.profile_path.clear();  // always fit fresh here
            std::ifstream file;
            std::istream& log = open_log(log_path, file);
            const PipelineArtifacts art = execute_stages(cfg, log);
            if (!art.profile_fitted) throw std::runtime_error("fit-profile: log produced no embeddings");
            save_profile(art.profile, out_path);
            std::printf("wrote %s (dim=%zu radius=%.9g)\n", out_path.c_str(), art.profile.centroid.size(),
                        art.profile.radius);
            return kExitOk;
        }

        if (freqdb->parsed()) {
            std::ifstream file;
            std::istream& log = open_log(log_path, file);
            FrequencyDb db(freq_threshold);
            const StreamStats stats = for_each_event(
                log, [&](const LogEvent& e) { db.add(e); },
                [](std::size_t lineno, const std::string& message) {
                    std::fprintf(stderr, "line %zu: rejected event: %s\n", lineno, message.c_str());
                });
            db.save(out_path);
            std::printf("wrote %s (events=%llu signatures=%zu parse_errors=%llu)\n", out_path.c_str(),
                        static_cast<unsigned long long>(stats.events), db.distinct_signatures(),
                        static_cast<unsigned long long>(stats.parse_errors));
            return kExitOk;
        }

        if (orc->parsed()) {
            const std::string which = orc->get_subcommands().front()->get_name();
            const auto want = [&](const char* name) { return which == name || which == "all"; };

            std::vector<oracle::CheckResult> results;
            if (want("locality"))
                results.push_back(oracle::check_locality(oracle_runs, oracle_max_nodes, oracle_base_seed));
            if (want("packing")) {
                results.push_back(
                    oracle::check_packing_bookkeeping(oracle_runs, oracle_max_nodes, oracle_base_seed));
                results.push_back(
                    oracle::check_packing_validity(oracle_runs, oracle_max_nodes, oracle_base_seed));
                results.push_back(oracle::check_packing_optimal(oracle_runs, oracle_base_seed));
            }
            if (want("gnn-equivalence"))
                results.push_back(oracle::check_gnn_equivalence(oracle_runs, oracle_nodes, oracle_base_seed));
            if (want("stats")) results.push_back(oracle::check_stats(oracle_runs, oracle_base_seed));
            if (want("featurize"))
                results.push_back(
                    oracle::check_featurize_schedule(oracle_runs, oracle_nodes, oracle_base_seed));

            int rc = kExitOk;
            for (const auto& c : results) rc |= report_check(c);
            return rc ? kExitRuntime : kExitOk;
        }
    } catch (const ConfigError& e) {
        for (const std::string& d : e.details()) std::fprintf(stderr, "config error: %s\n", d.c_str());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
