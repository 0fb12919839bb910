#include "provfaas/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <stdexcept>

namespace provfaas {

std::vector<std::string> SimConfig::validate() const {
    std::vector<std::string> errors;
    if (cold_start_ms < 0) errors.push_back("sim.cold_start_ms must be >= 0");
    if (per_cost_ms <= 0) errors.push_back("sim.per_cost_ms must be positive");
    if (max_instances == 0) errors.push_back("sim.max_instances must be positive");
    if (scale_target <= 0) errors.push_back("sim.scale_target must be positive");
    if (idle_timeout_ms <= 0) errors.push_back("sim.idle_timeout_ms must be positive");
    if (vertical_efficiency <= 0 || vertical_efficiency > 1)
        errors.push_back("sim.vertical_efficiency must be in (0, 1]");
    if (mode == SimMode::Static && static_instances == 0)
        errors.push_back("sim.static_instances must be positive in static mode");
    return errors;
}

LatencyStats latency_stats(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("latency_stats: empty sample set");
    double sum = 0;
    for (double x : samples) sum += x;
    const double n = static_cast<double>(samples.size());
    const double mean = sum / n;

    double sq = 0;
    for (double x : samples) sq += (x - mean) * (x - mean);
    const double stddev = std::sqrt(sq / n);
    if (mean == 0) throw std::invalid_argument("latency_stats: zero mean, cv undefined");

    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    auto rank = [&](double p) {
        std::size_t idx = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
        idx = std::min(std::max<std::size_t>(idx, 1), sorted.size()) - 1;
        return sorted[idx];
    };

    LatencyStats s;
    s.mean = mean;
    s.stddev = stddev;
    s.cv = stddev / mean;
    s.p50 = rank(50);
    s.p95 = rank(95);
    s.p99 = rank(99);
    return s;
}

LatencyStats latency_stats(const LatencyTrace& trace) {
    std::vector<double> xs;
    xs.reserve(trace.samples.size());
    for (const auto& s : trace.samples) xs.push_back(s.latency_ms);
    return latency_stats(xs);
}

namespace {

enum class EventKind : std::uint8_t { UnitArrival, InstanceReady, UnitDone, ScaleCheck, InstanceRetire };

struct SimEvent {
    double time_ms = 0;
    std::uint64_t seq = 0;  // tie-break: insertion order removes all ambiguity
    EventKind kind = EventKind::UnitArrival;
    std::uint64_t a = 0;  // unit index / instance id
    std::uint64_t b = 0;  // idle epoch for retire events
};

struct EventLater {
    bool operator()(const SimEvent& x, const SimEvent& y) const {
        if (x.time_ms != y.time_ms) return x.time_ms > y.time_ms;
        return x.seq > y.seq;
    }
};

struct QueuedUnit {
    std::uint64_t interval = 0;
    Stage stage = Stage::Embed;
    double cost = 0;
    std::uint32_t vertical_scale = 1;
};

enum class InstanceState : std::uint8_t { ColdStarting, Idle, Busy, Retired };

struct Instance {
    InstanceState state = InstanceState::Idle;
    double launched_ms = 0;
    double retired_ms = -1;
    std::uint64_t idle_epoch = 0;
};

struct IntervalState {
    double embed_arrival_ms = 0;
    double gnn_release_floor_ms = 0;  // the Gnn job's own arrival lower bound
    std::size_t embed_remaining = 0;
    std::size_t gnn_remaining = 0;
    std::vector<SimUnit> gnn_units;
    bool embed_done = false;
    bool done = false;
    double completion_ms = 0;
};

class Simulation {
public:
    Simulation(const std::vector<StageJob>& workload, const SimConfig& cfg, bool record_debug)
        : cfg_(cfg), record_debug_(record_debug) {
        if (auto errors = cfg.validate(); !errors.empty())
            throw std::invalid_argument("simulate: " + errors.front());

        for (const StageJob& job : workload) {
            IntervalState& iv = intervals_[job.interval];
            if (job.stage == Stage::Embed) {
                iv.embed_arrival_ms = job.arrival_ms;
                iv.embed_remaining = job.units.size();
                for (std::size_t i = 0; i < job.units.size(); ++i)
                    push(job.arrival_ms, EventKind::UnitArrival, encode_unit(job.interval, Stage::Embed, i));
                embed_units_[job.interval] = job.units;
            } else {
                iv.gnn_release_floor_ms = job.arrival_ms;
                iv.gnn_units = job.units;
                iv.gnn_remaining = job.units.size();
            }
        }

        const std::uint32_t initial =
            cfg.mode == SimMode::Static ? cfg.static_instances : 1;
        for (std::uint32_t i = 0; i < initial; ++i) spawn_instance(0.0, /*warm=*/true);
    }

    SimReport run() {
        // Zero-unit embed stages complete at arrival; resolve before looping.
        for (auto& [idx, iv] : intervals_)
            if (iv.embed_remaining == 0) complete_embed(idx, iv.embed_arrival_ms);

        while (!events_.empty()) {
            const SimEvent ev = events_.top();
            events_.pop();
            now_ = ev.time_ms;
            dispatch_event(ev);
            if (record_debug_) record_sample();
        }

        SimReport r;
        for (auto& [idx, iv] : intervals_) {
            if (!iv.done) {  // interval never completed: zero-unit workload edge
                iv.done = true;
                iv.completion_ms = iv.embed_arrival_ms;
            }
            r.trace.samples.push_back(LatencySample{idx, iv.completion_ms - iv.embed_arrival_ms});
        }
        for (const Instance& inst : instances_) {
            const double end = inst.retired_ms >= 0 ? inst.retired_ms : now_;
            r.instance_ms += end - inst.launched_ms;
        }
        r.peak_instances = peak_instances_;
        r.cold_starts = cold_starts_;
        r.units_completed = units_completed_;
        r.makespan_ms = now_;
        r.debug = std::move(debug_);
        return r;
    }

private:
    static std::uint64_t encode_unit(std::uint64_t interval, Stage stage, std::size_t unit) {
        return (interval << 21) | (static_cast<std::uint64_t>(stage) << 20) | unit;
    }

    void push(double time, EventKind kind, std::uint64_t a, std::uint64_t b = 0) {
        events_.push(SimEvent{time, seq_++, kind, a, b});
    }

    void dispatch_event(const SimEvent& ev) {
        switch (ev.kind) {
            case EventKind::UnitArrival: on_unit_arrival(ev.a); break;
            case EventKind::InstanceReady: on_instance_ready(ev.a); break;
            case EventKind::UnitDone: on_unit_done(ev.a, ev.b); break;
            case EventKind::ScaleCheck: on_scale_check(); break;
            case EventKind::InstanceRetire: on_instance_retire(ev.a, ev.b); break;
        }
    }

    void on_unit_arrival(std::uint64_t code) {
        const std::uint64_t interval = code >> 21;
        const Stage stage = static_cast<Stage>((code >> 20) & 1);
        const std::size_t unit = code & ((1u << 20) - 1);
        const SimUnit& su =
            stage == Stage::Embed ? embed_units_[interval][unit] : intervals_[interval].gnn_units[unit];
        queue_.push_back(QueuedUnit{interval, stage, su.cost, su.vertical_scale});
        try_dispatch();
        request_scale_check();
    }

    void on_instance_ready(std::uint64_t id) {
        Instance& inst = instances_[id];
        inst.state = InstanceState::Idle;
        ++inst.idle_epoch;
        try_dispatch();
        if (inst.state == InstanceState::Idle) schedule_retire(id);
    }

    void on_unit_done(std::uint64_t id, std::uint64_t code) {
        ++units_completed_;
        Instance& inst = instances_[id];
        inst.state = InstanceState::Idle;
        ++inst.idle_epoch;

        const std::uint64_t interval = code >> 21;
        const Stage stage = static_cast<Stage>((code >> 20) & 1);
        IntervalState& iv = intervals_[interval];
        if (stage == Stage::Embed) {
            if (--iv.embed_remaining == 0) complete_embed(interval, now_);
        } else {
            if (--iv.gnn_remaining == 0) complete_interval(iv, now_);
        }

        try_dispatch();
        if (inst.state == InstanceState::Idle) schedule_retire(id);
        request_scale_check();
    }

    void on_scale_check() {
        scale_check_pending_ = false;
        if (cfg_.mode != SimMode::Serverless) return;
        const std::size_t alive = alive_count();
        const double queued = static_cast<double>(queue_.size());
        if (queued / static_cast<double>(alive) <= cfg_.scale_target) return;
        const std::size_t desired = std::min<std::size_t>(
            cfg_.max_instances, static_cast<std::size_t>(std::ceil(queued / cfg_.scale_target)));
        for (std::size_t i = alive; i < desired; ++i) {
            spawn_instance(now_, /*warm=*/false);
            ++cold_starts_;
        }
    }

    void on_instance_retire(std::uint64_t id, std::uint64_t epoch) {
        Instance& inst = instances_[id];
        if (inst.state != InstanceState::Idle || inst.idle_epoch != epoch) return;
        if (alive_count() <= 1) return;  // keep one instance warm
        inst.state = InstanceState::Retired;
        inst.retired_ms = now_;
    }

    void complete_embed(std::uint64_t interval, double at_ms) {
        IntervalState& iv = intervals_[interval];
        if (iv.embed_done) return;
        iv.embed_done = true;
        if (iv.gnn_remaining == 0) {
            complete_interval(iv, at_ms);
            return;
        }
        const double release = std::max(at_ms, iv.gnn_release_floor_ms);
        for (std::size_t i = 0; i < iv.gnn_units.size(); ++i)
            push(release, EventKind::UnitArrival, encode_unit(interval, Stage::Gnn, i));
    }

    static void complete_interval(IntervalState& iv, double at_ms) {
        iv.done = true;
        iv.completion_ms = at_ms;
    }

    void try_dispatch() {
        while (!queue_.empty()) {
            std::size_t id = instances_.size();
            for (std::size_t i = 0; i < instances_.size(); ++i)
                if (instances_[i].state == InstanceState::Idle) {
                    id = i;
                    break;
                }
            if (id == instances_.size()) return;

            const QueuedUnit unit = queue_.front();
            queue_.pop_front();
            Instance& inst = instances_[id];
            inst.state = InstanceState::Busy;
            ++inst.idle_epoch;

            double service = unit.cost * cfg_.per_cost_ms;
            if (unit.vertical_scale > 1)
                service /= cfg_.vertical_efficiency * static_cast<double>(unit.vertical_scale);
            push(now_ + service, EventKind::UnitDone, id,
                 encode_unit(unit.interval, unit.stage, 0) | 0);
            // The unit index is irrelevant after dispatch; only interval and
            // stage matter for completion bookkeeping.
        }
    }

    void spawn_instance(double at_ms, bool warm) {
        Instance inst;
        inst.launched_ms = at_ms;
        if (warm) {
            inst.state = InstanceState::Idle;
        } else {
            inst.state = InstanceState::ColdStarting;
            push(at_ms + cfg_.cold_start_ms, EventKind::InstanceReady, instances_.size());
        }
        instances_.push_back(inst);
        peak_instances_ = std::max(peak_instances_, static_cast<std::uint32_t>(alive_count()));
        if (warm && !queue_.empty()) try_dispatch();
        if (warm && instances_.back().state == InstanceState::Idle) schedule_retire(instances_.size() - 1);
    }

    void schedule_retire(std::uint64_t id) {
        if (cfg_.mode != SimMode::Serverless) return;
        push(now_ + cfg_.idle_timeout_ms, EventKind::InstanceRetire, id, instances_[id].idle_epoch);
    }

    void request_scale_check() {
        if (cfg_.mode != SimMode::Serverless || scale_check_pending_) return;
        scale_check_pending_ = true;
        push(now_, EventKind::ScaleCheck, 0);
    }

    std::size_t alive_count() const {
        std::size_t n = 0;
        for (const Instance& i : instances_) n += i.state != InstanceState::Retired;
        return n;
    }

    void record_sample() {
        std::size_t idle = 0;
        for (const Instance& i : instances_) idle += i.state == InstanceState::Idle;
        debug_.push_back(SimDebugSample{now_, queue_.size(), idle, alive_count()});
    }

    SimConfig cfg_;
    bool record_debug_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, EventLater> events_;
    std::uint64_t seq_ = 0;
    double now_ = 0;
    std::deque<QueuedUnit> queue_;
    std::vector<Instance> instances_;
    std::map<std::uint64_t, IntervalState> intervals_;
    std::map<std::uint64_t, std::vector<SimUnit>> embed_units_;
    bool scale_check_pending_ = false;
    std::uint32_t peak_instances_ = 0;
    std::uint64_t cold_starts_ = 0;
    std::uint64_t units_completed_ = 0;
    std::vector<SimDebugSample> debug_;
};

}  // namespace

SimReport simulate(const std::vector<StageJob>& workload, const SimConfig& cfg, bool record_debug) {
    return Simulation(workload, cfg, record_debug).run();
}

}  // namespace provfaas
