#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "netgrow/events.hpp"
#include "netgrow/graph.hpp"
#include "netgrow/powerlaw.hpp"

namespace netgrow {

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what),
          line_number(line) {}
    std::size_t line_number;
};

struct ParseOptions {
    bool strict_timestamps = false;  // reject decreasing timestamps
};

// Event TSV: `t<TAB>u` (node-only) or `t<TAB>u<TAB>v` (edge); '#'-prefixed
// lines are comments; a trailing `#type=<Z|R|I|H>` field carries the
// generator tag. Malformed lines raise ParseError with their line number.
std::vector<EdgeEvent> parse_events(std::istream& in, const ParseOptions& options = {});

void write_event_line(std::ostream& out, const EdgeEvent& event);
void write_events_tsv(std::ostream& out, std::span<const EdgeEvent> events,
                      const std::string& provenance_comment);

// Sink that serializes events to TSV as they are produced.
class TsvEventWriter final : public EventSink {
public:
    TsvEventWriter(std::ostream& out, const std::string& provenance_comment);
    void on_event(const EdgeEvent& event) override;

private:
    std::ostream& out_;
};

struct EventTypeCounts {
    std::size_t z = 0, r = 0, i = 0, h = 0;
    std::size_t edge_total() const { return r + i + h; }
    std::size_t total() const { return z + r + i + h; }
};

// State at one snapshot of the 2^i schedule, with the event-type counts of
// the window since the previous snapshot and the running totals.
// schedule_n is the 2^i threshold; snapshot.node_count may exceed it by one
// when a two-node event crosses it.
struct TrajectoryPoint {
    std::size_t schedule_n = 0;
    Snapshot snapshot;
    double event_time = 0.0;
    EventTypeCounts window;
    std::size_t window_duplicates = 0;
    EventTypeCounts cumulative;
    std::size_t cumulative_duplicates = 0;
};

struct TrajectorySeries {
    std::vector<TrajectoryPoint> points;
    Snapshot final_snapshot;
    double final_time = 0.0;
    EventTypeCounts totals;
    std::size_t duplicate_edges = 0;
    std::size_t self_loops = 0;
    std::size_t events_applied = 0;
};

// Replays an event stream into a DynamicGraph, classifying each event and
// emitting a snapshot the first time the node count reaches 2^i (i >= 5 by
// default). Duplicate edges are classified (H by definition) but skipped;
// self-loops are skipped and counted separately.
//
// "Existing" for classification means the node id appeared in any earlier
// event, regardless of degree. Edges classified H are inserted with the
// homophily flag.
class StreamReplayer {
public:
    explicit StreamReplayer(std::size_t first_snapshot_exponent = 5);

    EventType classify(const EdgeEvent& event) const;
    void apply(const EdgeEvent& event);
    TrajectorySeries take_series();

    const DynamicGraph& graph() const { return graph_; }

private:
    NodeId intern(std::uint64_t external_id);

    DynamicGraph graph_;
    std::unordered_map<std::uint64_t, NodeId> id_map_;
    TrajectorySeries series_;
    EventTypeCounts window_;
    std::size_t window_duplicates_ = 0;
    std::size_t next_snapshot_;
    double last_time_ = 0.0;
};

// Sink adapter so generators can feed a replayer directly.
class ReplaySink final : public EventSink {
public:
    explicit ReplaySink(std::size_t first_snapshot_exponent = 5)
        : replayer(first_snapshot_exponent) {}
    void on_event(const EdgeEvent& event) override { replayer.apply(event); }
    StreamReplayer replayer;
};

TrajectorySeries replay(std::span<const EdgeEvent> events,
                        std::size_t first_snapshot_exponent = 5);

// (n, NZ) per snapshot.
std::vector<std::pair<std::size_t, double>> nz_series(const TrajectorySeries& trajectory);

// Uniform random permutation of the events; timestamps are reassigned so the
// k-th event of the permuted sequence carries the k-th smallest original
// timestamp. With edges_only, node-only events keep their positions and only
// edge events are permuted among edge positions.
std::vector<EdgeEvent> shuffle_events(std::span<const EdgeEvent> events, std::uint64_t seed,
                                      bool edges_only = false);

// Trajectory CSV (one row per snapshot). Exponent-fit columns print nan when
// the snapshot had no feasible fit. ratio_R/I/H are normalized over edge
// events in the window, ratio_Z over all events in the window.
void write_trajectory_csv(std::ostream& out, const TrajectorySeries& trajectory,
                          std::span<const std::optional<ExponentFitReport>> fits,
                          const std::string& provenance_comment);

// Per-snapshot exponentially binned degree distributions.
void write_distribution_csv(std::ostream& out, const TrajectorySeries& trajectory,
                            double bin_base, const std::string& provenance_comment);

}  // namespace netgrow
