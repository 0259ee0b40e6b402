#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "netgrow/models.hpp"
#include "netgrow/stream.hpp"

using namespace netgrow;

namespace {

bool same_event(const EdgeEvent& a, const EdgeEvent& b) {
    return a.timestamp == b.timestamp && a.u == b.u && a.v == b.v && a.tag == b.tag;
}

std::vector<EdgeEvent> forty_random_pairs() {
    std::vector<EdgeEvent> events;
    for (std::uint64_t k = 0; k < 40; ++k)
        events.push_back({static_cast<double>(k), 2 * k, 2 * k + 1, EventType::R});
    return events;
}

}  // namespace

TEST_CASE("parse_events formats and failures") {
    SUBCASE("edge, node-only, comments and tags") {
        std::istringstream in(
            "# provenance line\n"
            "0\t1\t2\n"
            "5\t7\n"
            "6\t3\t4\t#type=H\n"
            "\n");
        const auto events = parse_events(in);
        REQUIRE(events.size() == 3);
        CHECK(events[0].timestamp == 0.0);
        CHECK(events[0].u == 1);
        CHECK(events[0].v == 2);
        CHECK_FALSE(events[0].tag.has_value());
        CHECK(events[1].timestamp == 5.0);
        CHECK(events[1].u == 7);
        CHECK_FALSE(events[1].is_edge());
        CHECK(events[2].tag == EventType::H);
    }
    SUBCASE("malformed lines carry their line number") {
        std::istringstream in("0\t1\t2\nx\t1\t2\n");
        try {
            parse_events(in);
            FAIL("expected ParseError");
        } catch (const ParseError& err) {
            CHECK(err.line_number == 2);
        }
        std::istringstream bad_fields("0\t1\t2\t3\t4\n");
        CHECK_THROWS_AS(parse_events(bad_fields), ParseError);
    }
    SUBCASE("strict mode rejects decreasing timestamps") {
        std::istringstream in("5\t1\t2\n3\t3\t4\n");
        ParseOptions strict;
        strict.strict_timestamps = true;
        CHECK_THROWS_AS(parse_events(in, strict), ParseError);
        std::istringstream again("5\t1\t2\n3\t3\t4\n");
        CHECK(parse_events(again).size() == 2);  // lax by default
    }
    SUBCASE("serialization round-trips") {
        std::vector<EdgeEvent> events{
            {0.125, 3, std::nullopt, EventType::Z},
            {1.5, 4, 9, EventType::I},
            {2.75, 1, 2, std::nullopt},
            {1e-9, 18446744073709551615ull, std::nullopt, std::nullopt},
        };
        std::ostringstream out;
        write_events_tsv(out, events, "roundtrip test");
        std::istringstream in(out.str());
        const auto parsed = parse_events(in);
        REQUIRE(parsed.size() == events.size());
        for (std::size_t k = 0; k < events.size(); ++k) CHECK(same_event(parsed[k], events[k]));
    }
}

TEST_CASE("classification follows node novelty") {
    StreamReplayer replayer;
    const EdgeEvent first{0.0, 0, 1, std::nullopt};
    CHECK(replayer.classify(first) == EventType::R);
    replayer.apply(first);

    CHECK(replayer.classify({1.0, 0, 2, std::nullopt}) == EventType::I);
    CHECK(replayer.classify({1.0, 2, 0, std::nullopt}) == EventType::I);
    CHECK(replayer.classify({1.0, 0, 1, std::nullopt}) == EventType::H);
    CHECK(replayer.classify({1.0, 7, std::nullopt, std::nullopt}) == EventType::Z);
    CHECK(replayer.classify({1.0, 5, 6, std::nullopt}) == EventType::R);

    // A root node mentioned later joins with an I event, not R.
    replayer.apply({2.0, 9, std::nullopt, std::nullopt});
    CHECK(replayer.classify({3.0, 9, 42, std::nullopt}) == EventType::I);
}

TEST_CASE("replay emits snapshots on the power-of-two schedule") {
    const auto events = forty_random_pairs();
    const TrajectorySeries series = replay(events);
    REQUIRE(series.points.size() == 2);  // n reaches 32 and 64
    const TrajectoryPoint& point = series.points[0];
    CHECK(point.snapshot.node_count == 32);
    CHECK(point.snapshot.edge_count == 16);
    CHECK(point.snapshot.avg_degree == 1.0);
    CHECK(point.event_time == 15.0);  // the 16th event
    CHECK(point.window.r == 16);
    CHECK(point.window.total() == 16);
    CHECK(series.points[1].snapshot.node_count == 64);
    CHECK(series.points[1].window.r == 16);
    CHECK(series.final_snapshot.node_count == 80);
    CHECK(series.totals.r == 40);
}

TEST_CASE("replayed logs rebuild the same final state regardless of schedule") {
    const EventLog log = simulate_model_ii({0.01, 0.02, 0.04, 0.06, 10, 2}, 600, 99);
    const TrajectorySeries a = replay(log.events, 3);
    const TrajectorySeries b = replay(log.events, 5);
    const TrajectorySeries c = replay(log.events, 9);
    CHECK(a.points.size() > b.points.size());
    for (const TrajectorySeries* s : {&b, &c}) {
        CHECK(a.final_snapshot.node_count == s->final_snapshot.node_count);
        CHECK(a.final_snapshot.edge_count == s->final_snapshot.edge_count);
        CHECK(a.final_snapshot.degree_histogram == s->final_snapshot.degree_histogram);
    }
}

TEST_CASE("snapshot counts match an independent recount of the raw log") {
    const EventLog log = simulate_model_ii({0.002, 0.022, 0.038, 0.0645, 14, 2}, 2048, 23);
    const TrajectorySeries series = replay(log.events);

    // Recount nodes and deduplicated edges straight from the event list,
    // stopping at the same trigger rule (first time the id count reaches n).
    for (const TrajectoryPoint& point : series.points) {
        std::set<std::uint64_t> ids;
        std::set<std::pair<std::uint64_t, std::uint64_t>> edges;
        for (const EdgeEvent& event : log.events) {
            ids.insert(event.u);
            if (event.v && *event.v != event.u) {
                ids.insert(*event.v);
                edges.insert({std::min(event.u, *event.v), std::max(event.u, *event.v)});
            }
            if (ids.size() >= point.schedule_n) break;
        }
        CHECK(point.snapshot.node_count == ids.size());
        CHECK(point.snapshot.edge_count == edges.size());
        CHECK(point.snapshot.avg_degree ==
              doctest::Approx(2.0 * double(edges.size()) / double(ids.size()))
                  .epsilon(1e-15));
    }
}

TEST_CASE("generator tags agree with the classifier") {
    const EventLog log = simulate_model_ii({0.002, 0.022, 0.038, 0.0645, 14, 2}, 4096, 7);
    StreamReplayer replayer;
    std::size_t checked = 0;
    for (const EdgeEvent& event : log.events) {
        REQUIRE(event.tag.has_value());
        CHECK(replayer.classify(event) == *event.tag);
        replayer.apply(event);
        ++checked;
    }
    CHECK(checked == log.events.size());
}

TEST_CASE("duplicate and self-loop events are counted but not applied") {
    std::vector<EdgeEvent> events{
        {0.0, 0, 1, std::nullopt},  // R
        {1.0, 0, 1, std::nullopt},  // duplicate
        {2.0, 1, 0, std::nullopt},  // duplicate, reversed
        {3.0, 2, 2, std::nullopt},  // self-loop introducing node 2
        {4.0, 2, 0, std::nullopt},  // H: both 2 (via the self-loop) and 0 were seen
    };
    StreamReplayer replayer;
    for (std::size_t k = 0; k + 1 < events.size(); ++k) replayer.apply(events[k]);
    CHECK(replayer.classify(events[4]) == EventType::H);
    replayer.apply(events[4]);
    const TrajectorySeries series = replayer.take_series();
    CHECK(series.duplicate_edges == 2);
    CHECK(series.self_loops == 1);
    CHECK(series.final_snapshot.node_count == 3);
    CHECK(series.final_snapshot.edge_count == 2);
    CHECK(series.totals.r == 1);
    CHECK(series.totals.i == 0);
    CHECK(series.totals.h == 1);
}

TEST_CASE("window counts sum to applied events and ratios are consistent") {
    const EventLog log = simulate_model_ii({0.01, 0.03, 0.04, 0.062, 12, 2}, 3000, 17);
    const TrajectorySeries series = replay(log.events);
    REQUIRE(!series.points.empty());
    std::size_t total = 0;
    for (const TrajectoryPoint& point : series.points) {
        total += point.window.total();
        const std::size_t edges = point.window.edge_total();
        if (edges > 0) {
            const double rr = double(point.window.r) / double(edges);
            const double ri = double(point.window.i) / double(edges);
            const double rh = double(point.window.h) / double(edges);
            CHECK(rr >= 0.0);
            CHECK(rr <= 1.0);
            CHECK(rr + ri + rh == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(point.cumulative.total() == total);
    }
}

TEST_CASE("nz_series") {
    SUBCASE("no root events and no isolated nodes means NZ = 1") {
        const auto events = forty_random_pairs();
        const auto series = replay(events);
        for (auto [n, nz] : nz_series(series)) CHECK(nz == 1.0);
    }
    SUBCASE("alternating Z and R tends to 2/3") {
        std::vector<EdgeEvent> events;
        std::uint64_t next_id = 0;
        for (int k = 0; k < 400; ++k) {
            events.push_back({2.0 * k, next_id++, std::nullopt, EventType::Z});
            const std::uint64_t a = next_id++;
            const std::uint64_t b = next_id++;
            events.push_back({2.0 * k + 1, a, b, EventType::R});
        }
        const auto series = replay(events);
        const auto nz = nz_series(series);
        REQUIRE(!nz.empty());
        CHECK(std::abs(nz.back().second - 2.0 / 3.0) < 0.01);
    }
}

TEST_CASE("shuffle preserves the event multiset and the final state") {
    SUBCASE("single event is unchanged") {
        const std::vector<EdgeEvent> one{{3.0, 5, 6, EventType::R}};
        const auto shuffled = shuffle_events(one, 42);
        REQUIRE(shuffled.size() == 1);
        CHECK(same_event(shuffled[0], one[0]));
    }
    SUBCASE("final snapshot is bit-identical") {
        const EventLog log = simulate_model_ii({0.005, 0.02, 0.04, 0.06, 10, 2}, 2000, 5);
        const auto shuffled = shuffle_events(log.events, 1234);
        const TrajectorySeries original = replay(log.events);
        const TrajectorySeries randomized = replay(shuffled);
        CHECK(original.final_snapshot.node_count == randomized.final_snapshot.node_count);
        CHECK(original.final_snapshot.edge_count == randomized.final_snapshot.edge_count);
        CHECK(original.final_snapshot.degree_histogram ==
              randomized.final_snapshot.degree_histogram);
        // Timestamps follow the sorted original sequence.
        for (std::size_t k = 1; k < shuffled.size(); ++k)
            CHECK(shuffled[k].timestamp >= shuffled[k - 1].timestamp);
    }
    SUBCASE("edges_only keeps node events in place") {
        std::vector<EdgeEvent> events{
            {0.0, 0, std::nullopt, EventType::Z}, {1.0, 1, 2, EventType::R},
            {2.0, 3, std::nullopt, EventType::Z}, {3.0, 4, 5, EventType::R},
            {4.0, 6, 7, EventType::R},
        };
        const auto shuffled = shuffle_events(events, 9, true);
        CHECK(shuffled[0].u == 0);
        CHECK_FALSE(shuffled[0].is_edge());
        CHECK(shuffled[2].u == 3);
        std::size_t edge_count = 0;
        for (const auto& e : shuffled) edge_count += e.is_edge();
        CHECK(edge_count == 3);
    }
}

TEST_CASE("csv writers emit the pinned headers") {
    const EventLog log = simulate_model_ii({0.002, 0.022, 0.038, 0.0645, 14, 2}, 300, 3);
    const TrajectorySeries series = replay(log.events);
    std::vector<std::optional<ExponentFitReport>> fits(series.points.size());

    std::ostringstream traj;
    write_trajectory_csv(traj, series, fits, "unit test");
    std::istringstream lines(traj.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "# unit test");
    std::getline(lines, line);
    CHECK(line ==
          "n,e,avg_degree,nz,alpha_all,alpha_opt,x_opt,alpha_set_min,alpha_set_max,"
          "ratio_R,ratio_I,ratio_H,ratio_Z");

    std::ostringstream dist;
    write_distribution_csv(dist, series, 2.0, "unit test");
    std::istringstream dlines(dist.str());
    std::getline(dlines, line);
    CHECK(line == "# unit test");
    std::getline(dlines, line);
    CHECK(line == "snapshot_n,bin_low,bin_high,density");
}
