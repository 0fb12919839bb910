#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "provfaas/oracle/checks.hpp"
#include "provfaas/sim.hpp"
#include "provfaas/workload.hpp"

using namespace provfaas;

namespace {

SimConfig base_config(SimMode mode, std::uint32_t static_n = 1) {
    SimConfig cfg;
    cfg.per_cost_ms = 100;
    cfg.cold_start_ms = 500;
    cfg.scale_target = 2;
    cfg.idle_timeout_ms = 10000;
    cfg.max_instances = 32;
    cfg.mode = mode;
    cfg.static_instances = static_n;
    return cfg;
}

StageJob job(std::uint64_t interval, Stage stage, double arrival, std::vector<double> costs) {
    StageJob j{interval, stage, arrival, {}};
    for (double c : costs) j.units.push_back(SimUnit{c, 1});
    return j;
}

double latency_of(const SimReport& r, std::uint64_t interval) {
    for (const auto& s : r.trace.samples)
        if (s.interval == interval) return s.latency_ms;
    FAIL("no sample for interval ", interval);
    return -1;
}

}  // namespace

TEST_CASE("simulate: one warm instance serves one unit in its service time") {
    const std::vector<StageJob> wl{job(0, Stage::Embed, 0, {10}), job(0, Stage::Gnn, 0, {})};
    const SimReport r = simulate(wl, base_config(SimMode::Static, 1));
    CHECK(latency_of(r, 0) == doctest::Approx(1000.0));
    CHECK(r.units_completed == 1);
}

TEST_CASE("simulate: two identical units queue on one instance, run parallel on two") {
    const std::vector<StageJob> wl{job(0, Stage::Embed, 0, {10, 10}), job(0, Stage::Gnn, 0, {})};
    CHECK(latency_of(simulate(wl, base_config(SimMode::Static, 1)), 0) == doctest::Approx(2000.0));
    CHECK(latency_of(simulate(wl, base_config(SimMode::Static, 2)), 0) == doctest::Approx(1000.0));
}

TEST_CASE("simulate: hand-traced two-stage interval") {
    // Static(1), per-cost 100 ms. Embed units cost 2 and 3, gnn unit cost 1.
    //   t=0    unit(2) starts, unit(3) queued
    //   t=200  unit(2) done, unit(3) starts
    //   t=500  embed stage complete, gnn unit released and starts
    //   t=600  gnn done -> latency 600
    const std::vector<StageJob> wl{job(0, Stage::Embed, 0, {2, 3}), job(0, Stage::Gnn, 0, {1})};
    CHECK(latency_of(simulate(wl, base_config(SimMode::Static, 1)), 0) == doctest::Approx(600.0));
    // Static(2): embed halves run side by side -> 300, then gnn -> 400.
    CHECK(latency_of(simulate(wl, base_config(SimMode::Static, 2)), 0) == doctest::Approx(400.0));
}

TEST_CASE("simulate: gnn stage waits for the embed barrier even with idle instances") {
    // Plenty of instances: gnn could start at t=0 but must wait for embed.
    const std::vector<StageJob> wl{job(0, Stage::Embed, 0, {10}), job(0, Stage::Gnn, 0, {1, 1})};
    const SimReport r = simulate(wl, base_config(SimMode::Static, 4));
    CHECK(latency_of(r, 0) == doctest::Approx(1100.0));
}

TEST_CASE("simulate: zero-unit interval completes instantly") {
    const std::vector<StageJob> wl{job(0, Stage::Embed, 50, {}), job(0, Stage::Gnn, 50, {}),
                                   job(1, Stage::Embed, 100, {1}), job(1, Stage::Gnn, 100, {})};
    const SimReport r = simulate(wl, base_config(SimMode::Static, 1));
    CHECK(latency_of(r, 0) == doctest::Approx(0.0));
    CHECK(latency_of(r, 1) == doctest::Approx(100.0));
}

TEST_CASE("simulate: vertical scaling shortens oversize units") {
    StageJob embed{0, Stage::Embed, 0, {SimUnit{100, 4}}};  // hint 4, efficiency 0.8
    const std::vector<StageJob> wl{embed, job(0, Stage::Gnn, 0, {})};
    const SimReport r = simulate(wl, base_config(SimMode::Static, 1));
    // 100 cost * 100 ms / (0.8 * 4) = 3125 ms instead of 10000.
    CHECK(latency_of(r, 0) == doctest::Approx(3125.0));
}

TEST_CASE("simulate: cold starts delay new capacity") {
    // Serverless, one warm instance. Six cost-10 units at t=0: queue jumps to
    // 6, scale check launches ceil(6/2)=3 instances total (2 new, ready at
    // 500). Work then spreads across three instances.
    const std::vector<StageJob> wl{job(0, Stage::Embed, 0, {10, 10, 10, 10, 10, 10}),
                                   job(0, Stage::Gnn, 0, {})};
    const SimReport r = simulate(wl, base_config(SimMode::Serverless));
    CHECK(r.cold_starts == 2);
    // Warm instance serves two units (0-1000, 1000-2000); the two cold ones
    // serve two each from t=500 (500-1500, 1500-2500). Stage ends at 2500.
    CHECK(latency_of(r, 0) == doctest::Approx(2500.0));
    CHECK(r.peak_instances == 3);
}

TEST_CASE("simulate: serverless under a burst beats the static tail") {
    std::vector<StageJob> wl;
    for (std::uint64_t i = 0; i < 40; ++i) {
        wl.push_back(job(i, Stage::Embed, 0, {1}));  // 40 unit-cost units, all at once
        wl.push_back(job(i, Stage::Gnn, 0, {}));
    }
    const SimReport sls = simulate(wl, base_config(SimMode::Serverless));
    const SimReport fix = simulate(wl, base_config(SimMode::Static, 2));
    const LatencyStats a = latency_stats(sls.trace);
    const LatencyStats b = latency_stats(fix.trace);
    CHECK(a.p95 < b.p95);
}

TEST_CASE("simulate: max_instances=1 serverless degenerates exactly to static(1)") {
    std::vector<StageJob> wl;
    for (std::uint64_t i = 0; i < 12; ++i) {
        wl.push_back(job(i, Stage::Embed, 400.0 * static_cast<double>(i), {3, 2}));
        wl.push_back(job(i, Stage::Gnn, 400.0 * static_cast<double>(i), {1}));
    }
    SimConfig one = base_config(SimMode::Serverless);
    one.max_instances = 1;
    const SimReport a = simulate(wl, one);
    const SimReport b = simulate(wl, base_config(SimMode::Static, 1));
    REQUIRE(a.trace.samples.size() == b.trace.samples.size());
    for (std::size_t i = 0; i < a.trace.samples.size(); ++i) {
        CHECK(a.trace.samples[i].interval == b.trace.samples[i].interval);
        CHECK(a.trace.samples[i].latency_ms == b.trace.samples[i].latency_ms);
    }
}

TEST_CASE("simulate: deterministic replay, field for field") {
    std::vector<StageJob> wl;
    for (std::uint64_t i = 0; i < 30; ++i) {
        wl.push_back(job(i, Stage::Embed, 250.0 * static_cast<double>(i), {5, 3, 2}));
        wl.push_back(job(i, Stage::Gnn, 250.0 * static_cast<double>(i), {2}));
    }
    const SimReport a = simulate(wl, base_config(SimMode::Serverless));
    const SimReport b = simulate(wl, base_config(SimMode::Serverless));
    REQUIRE(a.trace.samples.size() == b.trace.samples.size());
    for (std::size_t i = 0; i < a.trace.samples.size(); ++i)
        CHECK(a.trace.samples[i].latency_ms == b.trace.samples[i].latency_ms);
    CHECK(a.instance_ms == b.instance_ms);
    CHECK(a.cold_starts == b.cold_starts);
    CHECK(a.peak_instances == b.peak_instances);
    CHECK(a.makespan_ms == b.makespan_ms);
}

TEST_CASE("simulate: conservation and work conservation") {
    std::vector<StageJob> wl;
    std::size_t total_units = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        wl.push_back(job(i, Stage::Embed, 100.0 * static_cast<double>(i), {4, 1}));
        wl.push_back(job(i, Stage::Gnn, 100.0 * static_cast<double>(i), {2}));
        total_units += 3;
    }
    for (SimMode mode : {SimMode::Serverless, SimMode::Static}) {
        const SimReport r = simulate(wl, base_config(mode, 2), /*record_debug=*/true);
        CHECK(r.units_completed == total_units);
        // Minimum possible latency: all three units in parallel is 400+200.
        for (const auto& s : r.trace.samples) CHECK(s.latency_ms >= 600.0 - 1e-9);
        // An instance never idles while the queue is non-empty.
        for (const auto& snap : r.debug)
            if (snap.queued > 0) CHECK(snap.idle == 0);
    }
}

TEST_CASE("simulate: rejects invalid configs") {
    SimConfig bad = base_config(SimMode::Serverless);
    bad.vertical_efficiency = 1.5;
    CHECK_THROWS_AS(simulate({}, bad), std::invalid_argument);
    SimConfig bad2 = base_config(SimMode::Static);
    bad2.static_instances = 0;
    CHECK_THROWS_AS(simulate({}, bad2), std::invalid_argument);
}

TEST_CASE("latency_stats: constant samples have zero spread") {
    const std::vector<double> xs(8, 2.0);
    const LatencyStats s = latency_stats(xs);
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.stddev == doctest::Approx(0.0));
    CHECK(s.cv == doctest::Approx(0.0));
    CHECK(s.p50 == doctest::Approx(2.0));
}

TEST_CASE("latency_stats: mean 2.10 with std 1.09 gives cv 0.52") {
    // Two-point construction: {1.01, 3.19} has exactly this mean and
    // population std; the ratio lands within 1e-3 of the rounded 0.52.
    const std::vector<double> xs{1.01, 3.19};
    const LatencyStats s = latency_stats(xs);
    CHECK(s.mean == doctest::Approx(2.10));
    CHECK(s.stddev == doctest::Approx(1.09));
    CHECK(std::abs(s.cv - 0.52) < 1e-3);
    CHECK(s.cv == doctest::Approx(1.09 / 2.10));
}

TEST_CASE("latency_stats: empty input and zero mean are errors") {
    CHECK_THROWS_AS(latency_stats(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(latency_stats(std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("latency_stats: agrees with the streaming reference") {
    const auto r = oracle::check_stats(50, 900);
    CHECK_MESSAGE(r.ok(), "first failing seed: ", r.failing_seeds.empty() ? 0 : r.failing_seeds[0]);
}

TEST_CASE("workload: exact mode emits identical flat intervals") {
    SyntheticSpec spec;
    spec.intervals = 10;
    spec.base_nodes = 20;
    spec.poisson = false;
    spec.burst_multiplier = 1;
    const auto loads = synth_interval_loads(spec, 1);
    REQUIRE(loads.size() == 10);
    for (const auto& l : loads) {
        CHECK(l.embed_cost_total == doctest::Approx(loads[0].embed_cost_total));
        CHECK(l.gnn_edges_total == loads[0].gnn_edges_total);
    }
}

TEST_CASE("workload: burst intervals carry the multiplier") {
    SyntheticSpec spec;
    spec.intervals = 30;
    spec.base_nodes = 10;
    spec.poisson = false;
    spec.burst_start = 10;
    spec.burst_every = 20;
    spec.burst_len = 5;
    spec.burst_multiplier = 10;
    const auto loads = synth_interval_loads(spec, 1);
    CHECK(loads[9].gnn_edges_total == 30);    // 10 nodes * 3 edges
    CHECK(loads[10].gnn_edges_total == 300);  // 100 nodes
    CHECK(loads[14].gnn_edges_total == 300);
    CHECK(loads[15].gnn_edges_total == 30);

    // Poisson mode: the burst average should still be roughly 10x.
    spec.poisson = true;
    const auto noisy = synth_interval_loads(spec, 7);
    double flat = 0, burst = 0;
    for (std::uint64_t i = 0; i < 10; ++i) flat += static_cast<double>(noisy[i].gnn_edges_total);
    for (std::uint64_t i = 10; i < 15; ++i) burst += static_cast<double>(noisy[i].gnn_edges_total);
    CHECK(burst / 5.0 > 4.0 * (flat / 10.0));
}

TEST_CASE("workload: same seed reproduces the workload exactly") {
    SyntheticSpec spec;
    spec.intervals = 50;
    const auto a = synth_interval_loads(spec, 99);
    const auto b = synth_interval_loads(spec, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].embed_cost_total == b[i].embed_cost_total);
        CHECK(a[i].gnn_edges_total == b[i].gnn_edges_total);
    }
}

TEST_CASE("workload: unit splitting respects budgets and conserves cost") {
    SyntheticSpec spec;
    spec.intervals = 5;
    spec.base_nodes = 50;
    const auto loads = synth_interval_loads(spec, 3);
    UnitSplitParams split;
    split.embed_unit_budget = 13;
    split.gnn_capacity_edges = 40;
    const auto jobs = jobs_from_loads(loads, split);
    REQUIRE(jobs.size() == 10);
    for (const auto& j : jobs) {
        double total = 0;
        for (const auto& u : j.units) {
            total += u.cost;
            if (j.stage == Stage::Embed) CHECK(u.cost <= split.embed_unit_budget + 1e-9);
        }
        if (j.stage == Stage::Embed)
            CHECK(total == doctest::Approx(loads[j.interval].embed_cost_total));
    }
}

TEST_CASE("workload: replay csv round-trips") {
    SyntheticSpec spec;
    spec.intervals = 12;
    const auto loads = synth_interval_loads(spec, 5);
    write_replay_csv("replay_roundtrip.csv", loads);
    const auto back = read_replay_csv("replay_roundtrip.csv");
    REQUIRE(back.size() == loads.size());
    for (std::size_t i = 0; i < loads.size(); ++i) {
        CHECK(back[i].interval == loads[i].interval);
        CHECK(back[i].embed_cost_total == doctest::Approx(loads[i].embed_cost_total).epsilon(1e-6));
        CHECK(back[i].gnn_edges_total == loads[i].gnn_edges_total);
    }
    CHECK_THROWS_AS(read_replay_csv("does_not_exist.csv"), std::runtime_error);
}
