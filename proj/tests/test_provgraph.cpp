#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "provfaas/filters.hpp"
#include "provfaas/frequency.hpp"
#include "provfaas/graph.hpp"
#include "provfaas/jsonl.hpp"
#include "provfaas/oracle/reference.hpp"
#include "provfaas/rng.hpp"

using namespace provfaas;

namespace {

LogEvent ev(std::int64_t ts, EventType type, const std::string& subj, const std::string& obj,
            const std::string& obj_attr = "") {
    LogEvent e;
    e.ts_ns = ts;
    e.type = type;
    e.subject = EntityRef{subj, EntityType::Process, "/bin/" + subj};
    e.object = EntityRef{obj, EntityType::File, obj_attr.empty() ? "/data/" + obj : obj_attr};
    return e;
}

// Undirected path graph a-b-c-...; returns node ids in path order.
ProvenanceGraph path_graph(std::size_t n) {
    ProvenanceGraph g;
    for (std::size_t i = 0; i + 1 < n; ++i)
        g.ingest(ev(1000 + static_cast<std::int64_t>(i), EventType::Write, "p" + std::to_string(i),
                    "p" + std::to_string(i + 1)));
    return g;
}

}  // namespace

TEST_CASE("ingest: one fork event builds the minimal graph") {
    ProvenanceGraph g;
    CHECK(g.ingest(ev(100, EventType::Fork, "parent", "child")));
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(g.interval_active().size() == 2);
}

TEST_CASE("ingest: duplicate events make parallel edges") {
    ProvenanceGraph g;
    const LogEvent e = ev(100, EventType::Read, "proc", "file");
    g.ingest(e);
    g.ingest(e);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 2);
    CHECK(g.interval_active().size() == 2);
}

TEST_CASE("ingest: reverse adjacency is the transpose on a triangle") {
    ProvenanceGraph g;
    g.ingest(ev(1, EventType::Send, "A", "B"));
    g.ingest(ev(2, EventType::Send, "B", "C"));
    g.ingest(ev(3, EventType::Send, "C", "A"));
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);

    const EntityId a = *g.find("A");
    REQUIRE(g.in_edge_ids(a).size() == 1);
    const EdgeRecord& incoming = g.edge(g.in_edge_ids(a)[0]);
    CHECK(g.node(incoming.src).key == "C");

    // Transpose exactly: every edge appears once in src's out list and once
    // in dst's in list.
    for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
        const EdgeRecord& er = g.edge(e);
        auto out = g.out_edge_ids(er.src);
        auto in = g.in_edge_ids(er.dst);
        CHECK(std::count(out.begin(), out.end(), e) == 1);
        CHECK(std::count(in.begin(), in.end(), e) == 1);
    }
}

TEST_CASE("ingest: events beyond the skew window are dropped and counted") {
    ProvenanceGraph g(/*skew_window_ns=*/1000);
    CHECK(g.ingest(ev(10'000, EventType::Read, "a", "b")));
    CHECK(g.ingest(ev(9'500, EventType::Read, "a", "b")));    // within the window
    CHECK_FALSE(g.ingest(ev(8'000, EventType::Read, "a", "b")));  // stale
    CHECK(g.dropped_events() == 1);
    CHECK(g.edge_count() == 2);
}

TEST_CASE("close_interval: empty interval has an empty active set") {
    ProvenanceGraph g;
    const auto snap = g.close_interval({0, 1000, 0});
    CHECK(snap.active.empty());
}

TEST_CASE("close_interval: distinct endpoints are counted once") {
    ProvenanceGraph g;
    g.ingest(ev(1, EventType::Read, "p1", "f1"));
    g.ingest(ev(2, EventType::Read, "p1", "f2"));
    g.ingest(ev(3, EventType::Write, "p2", "f1"));
    g.ingest(ev(4, EventType::Read, "p1", "f1"));
    g.ingest(ev(5, EventType::Read, "p2", "f2"));
    const auto snap = g.close_interval({0, 10, 0});
    CHECK(snap.active.size() == 4);
    CHECK(std::is_sorted(snap.active.begin(), snap.active.end()));
}

TEST_CASE("close_interval: reset gives disjoint snapshots for disjoint events") {
    ProvenanceGraph g;
    g.ingest(ev(1, EventType::Read, "p1", "f1"));
    const auto first = g.close_interval({0, 10, 0});
    g.ingest(ev(11, EventType::Read, "p2", "f2"));
    const auto second = g.close_interval({10, 20, 1});

    std::set<EntityId> overlap;
    for (EntityId v : first.active)
        if (std::count(second.active.begin(), second.active.end(), v)) overlap.insert(v);
    CHECK(first.active.size() == 2);
    CHECK(second.active.size() == 2);
    CHECK(overlap.empty());
    CHECK(g.close_interval({20, 30, 2}).active.empty());
}

TEST_CASE("locality_filter: 2K hops on a path") {
    const ProvenanceGraph g = path_graph(6);
    const EntityId a = *g.find("p0");
    const std::vector<EntityId> active{a};
    const auto kept = locality_filter(g, active, 1);
    CHECK(kept == std::vector<EntityId>{*g.find("p0"), *g.find("p1"), *g.find("p2")});
}

TEST_CASE("locality_filter: saturation when everything is active") {
    const ProvenanceGraph g = path_graph(6);
    std::vector<EntityId> all;
    for (EntityId v = 0; v < g.node_count(); ++v) all.push_back(v);
    CHECK(locality_filter(g, all, 2) == all);
}

TEST_CASE("locality_filter: isolated active node keeps only itself") {
    ProvenanceGraph g;
    const EntityId lone = g.add_node("lone", EntityType::Process, "/bin/lone");
    CHECK(locality_filter(g, std::vector<EntityId>{lone}, 3) == std::vector<EntityId>{lone});
}

TEST_CASE("locality_filter: unknown active id is an error naming the id") {
    const ProvenanceGraph g = path_graph(3);
    const std::vector<EntityId> active{99};
    CHECK_THROWS_WITH_AS(locality_filter(g, active, 1),
                         doctest::Contains("99"), std::invalid_argument);
}

TEST_CASE("frequency_filter: all-frequent graph filters to nothing") {
    ProvenanceGraph g;
    FrequencyDb db(10);
    for (int i = 0; i < 20; ++i) {
        const LogEvent e = ev(100 + i, EventType::Read, "p", "f");
        g.ingest(e);
        db.add(e);
    }
    CHECK(frequency_filter(g, db, 2).empty());
}

TEST_CASE("frequency_filter: huge threshold keeps the closure of all edge endpoints") {
    ProvenanceGraph g = path_graph(4);
    g.add_node("isolated", EntityType::Memory, "");
    FrequencyDb db(UINT64_MAX);  // everything rare
    const auto kept = frequency_filter(g, db, 1);
    CHECK(kept.size() == 4);  // the isolated node has no incident edge
    CHECK_FALSE(std::count(kept.begin(), kept.end(), *g.find("isolated")));
}

TEST_CASE("frequency_filter: one rare edge expands to its 2K ball") {
    SplitMix64 rng(7);
    ProvenanceGraph g = oracle::random_graph(rng, 10, 1.5);
    FrequencyDb db(2);
    for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
        const EdgeRecord& er = g.edge(e);
        db.add_signature(edge_signature(g.node(er.src).type, er.type, g.node(er.dst).attr), 100);
    }
    // Make one edge's signature rare by adding a fresh parallel edge with a
    // distinct object attribute.
    const EntityId u = g.edge(0).src, v = g.edge(0).dst;
    ProvenanceGraph g2 = g;
    LogEvent rare;
    rare.ts_ns = 10'000'000'000;
    rare.type = EventType::Exec;
    rare.subject = EntityRef{g.node(u).key, g.node(u).type, g.node(u).attr};
    rare.object = EntityRef{g.node(v).key, g.node(v).type, "/very/rare/object"};
    g2.ingest(rare);

    const auto kept = frequency_filter(g2, db, 1);
    const auto expected = oracle::bfs_ball(g2, std::vector<EntityId>{u, v}, 2);
    CHECK(kept == expected);
}

TEST_CASE("build_frequency_db: counts match a brute-force tally") {
    std::vector<LogEvent> stream;
    SUBCASE("empty stream") {
        const FrequencyDb db = build_frequency_db(stream, 10);
        CHECK(db.distinct_signatures() == 0);
        CHECK(db.count("PROCESS:READ:/x") == 0);
    }
    SUBCASE("three identical reads") {
        for (int i = 0; i < 3; ++i) stream.push_back(ev(i, EventType::Read, "p", "f", "/etc/passwd"));
        const FrequencyDb db = build_frequency_db(stream, 10);
        CHECK(db.count("PROCESS:READ:/etc/passwd") == 3);
    }
    SUBCASE("mixed stream of 100 events over 5 classes") {
        SplitMix64 rng(42);
        std::map<std::string, std::uint64_t> tally;
        for (int i = 0; i < 100; ++i) {
            const auto cls = rng.next_below(5);
            const LogEvent e = ev(i, static_cast<EventType>(cls), "p" + std::to_string(cls),
                                  "f" + std::to_string(cls), "/cls/" + std::to_string(cls));
            stream.push_back(e);
            ++tally[edge_signature(e.subject.type, e.type, e.object.attr)];
        }
        const FrequencyDb db = build_frequency_db(stream, 10);
        CHECK(db.distinct_signatures() == tally.size());
        for (const auto& [sig, n] : tally) CHECK(db.count(sig) == n);
    }
}

TEST_CASE("frequency db: save/load round-trip") {
    std::vector<LogEvent> stream;
    for (int i = 0; i < 7; ++i) stream.push_back(ev(i, EventType::Write, "p", "f", "/tmp/x y"));
    const FrequencyDb db = build_frequency_db(stream, 3);
    const std::string path = "freqdb_roundtrip.tsv";
    db.save(path);
    const FrequencyDb loaded = FrequencyDb::load(path);
    CHECK(loaded.threshold() == 3);
    CHECK(loaded.counts() == db.counts());
    CHECK(loaded.count("PROCESS:WRITE:/tmp/x") == 7);  // token stops at whitespace
}

TEST_CASE("induced_subgraph: keep-all is an isomorphic copy") {
    SplitMix64 rng(3);
    const ProvenanceGraph g = oracle::random_graph(rng, 20, 2.0);
    std::vector<EntityId> all;
    for (EntityId v = 0; v < g.node_count(); ++v) all.push_back(v);
    const SubgraphResult r = induced_subgraph(g, all);
    CHECK(r.graph.node_count() == g.node_count());
    CHECK(r.graph.edge_count() == g.edge_count());
    for (EntityId v = 0; v < g.node_count(); ++v) {
        CHECK(r.to_parent[v] == v);
        CHECK(r.graph.node(v).key == g.node(v).key);
    }
}

TEST_CASE("induced_subgraph: empty keep set gives the empty graph") {
    const ProvenanceGraph g = path_graph(4);
    const SubgraphResult r = induced_subgraph(g, std::vector<EntityId>{});
    CHECK(r.graph.node_count() == 0);
    CHECK(r.graph.edge_count() == 0);
}

TEST_CASE("induced_subgraph: two kept triangle nodes keep one edge iff adjacent") {
    ProvenanceGraph g;
    g.ingest(ev(1, EventType::Send, "A", "B"));
    g.ingest(ev(2, EventType::Send, "B", "C"));
    g.ingest(ev(3, EventType::Send, "C", "A"));
    const EntityId a = *g.find("A"), b = *g.find("B"), c = *g.find("C");
    for (auto [x, y] : {std::pair{a, b}, {b, c}, {a, c}}) {
        std::vector<EntityId> keep{std::min(x, y), std::max(x, y)};
        const SubgraphResult r = induced_subgraph(g, keep);
        CHECK(r.graph.node_count() == 2);
        CHECK(r.graph.edge_count() == 1);  // the triangle connects every pair
    }
}

TEST_CASE("property: locality_filter equals the BFS reference on random graphs") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        SplitMix64 rng(seed);
        const std::size_t n = 2 + rng.next_below(200);
        const ProvenanceGraph g = oracle::random_graph(rng, n, 0.3 + rng.next_double() * 3.0);
        const unsigned k = 1 + static_cast<unsigned>(rng.next_below(3));
        std::vector<EntityId> active{rng.next_below(n)};
        CHECK(locality_filter(g, active, k) == oracle::bfs_ball(g, active, 2 * k));
    }
}

TEST_CASE("property: locality_filter is monotone in the active set and in K") {
    SplitMix64 rng(11);
    const ProvenanceGraph g = oracle::random_graph(rng, 120, 1.8);
    std::vector<EntityId> small{3, 17}, large{3, 17, 42, 90};
    const auto from_small = locality_filter(g, small, 1);
    const auto from_large = locality_filter(g, large, 1);
    CHECK(std::includes(from_large.begin(), from_large.end(), from_small.begin(), from_small.end()));

    const auto k1 = locality_filter(g, small, 1);
    const auto k2 = locality_filter(g, small, 2);
    CHECK(std::includes(k2.begin(), k2.end(), k1.begin(), k1.end()));
}

TEST_CASE("property: filtering the induced subgraph again changes nothing") {
    SplitMix64 rng(5);
    const ProvenanceGraph g = oracle::random_graph(rng, 80, 1.5);
    std::vector<EntityId> active{1, 2, 3};
    const auto kept = locality_filter(g, active, 1);
    const SubgraphResult sub = induced_subgraph(g, kept);

    std::vector<EntityId> local_active;
    for (EntityId v : active) local_active.push_back(sub.to_local.at(v));
    std::sort(local_active.begin(), local_active.end());
    const auto kept_again = locality_filter(sub.graph, local_active, 1);

    std::vector<EntityId> all_local(sub.graph.node_count());
    for (EntityId v = 0; v < sub.graph.node_count(); ++v) all_local[v] = v;
    CHECK(kept_again == all_local);
}

TEST_CASE("property: ingestion order does not change the edge multiset") {
    std::vector<LogEvent> events;
    SplitMix64 rng(9);
    for (int i = 0; i < 40; ++i)
        events.push_back(ev(1000 + i, static_cast<EventType>(rng.next_below(10)),
                            "s" + std::to_string(rng.next_below(8)),
                            "o" + std::to_string(rng.next_below(8))));

    auto edge_multiset = [](const ProvenanceGraph& g) {
        std::multiset<std::tuple<std::string, std::string, int, std::int64_t>> edges;
        for (std::uint64_t e = 0; e < g.edge_count(); ++e) {
            const EdgeRecord& er = g.edge(e);
            edges.insert({g.node(er.src).key, g.node(er.dst).key, static_cast<int>(er.type), er.ts_ns});
        }
        return edges;
    };

    ProvenanceGraph in_order;
    for (const auto& e : events) in_order.ingest(e);

    std::vector<LogEvent> shuffled = events;
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
    ProvenanceGraph out_of_order;  // default skew window easily covers 40 ns of spread
    for (const auto& e : shuffled) out_of_order.ingest(e);

    CHECK(out_of_order.dropped_events() == 0);
    CHECK(edge_multiset(in_order) == edge_multiset(out_of_order));
}

TEST_CASE("property: threshold 0 with all counts >= 1 filters everything") {
    ProvenanceGraph g;
    FrequencyDb db(0);
    for (int i = 0; i < 10; ++i) {
        const LogEvent e = ev(i, EventType::Read, "p" + std::to_string(i % 3), "f");
        g.ingest(e);
        db.add(e);
    }
    CHECK(frequency_filter(g, db, 2).empty());
}

TEST_CASE("jsonl: parse errors name the offending field") {
    auto err = [](const std::string& line) {
        const auto r = parse_log_event(line);
        REQUIRE(std::holds_alternative<std::string>(r));
        return std::get<std::string>(r);
    };
    CHECK(err("{}").find("'ts'") != std::string::npos);
    CHECK(err(R"({"ts":1})").find("'type'") != std::string::npos);
    CHECK(err(R"({"ts":1,"type":"NOPE"})").find("'type'") != std::string::npos);
    CHECK(err(R"({"ts":1,"type":"READ"})").find("'subj'") != std::string::npos);
    CHECK(err(R"({"ts":1,"type":"READ","subj":{"key":"a","type":"PROCESS"},"obj":{"key":"b"}})")
              .find("'obj.type'") != std::string::npos);
    CHECK(err("not json at all").find("JSON") != std::string::npos);
}

TEST_CASE("jsonl: round-trip through text") {
    const LogEvent e = ev(123456789, EventType::Connect, "proc", "sock", "10.0.0.5:443");
    const auto parsed = parse_log_event(to_jsonl(e));
    REQUIRE(std::holds_alternative<LogEvent>(parsed));
    const LogEvent& p = std::get<LogEvent>(parsed);
    CHECK(p.ts_ns == e.ts_ns);
    CHECK(p.type == e.type);
    CHECK(p.subject.key == e.subject.key);
    CHECK(p.object.attr == e.object.attr);
}
