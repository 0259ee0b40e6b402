#include "netgrow/stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "netgrow/version.hpp"

namespace netgrow {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    return s;
}

double parse_double(std::string_view token, std::size_t line) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(line, "non-numeric timestamp field '" + std::string(token) + "'");
    return value;
}

std::uint64_t parse_id(std::string_view token, std::size_t line) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(line, "non-numeric node id field '" + std::string(token) + "'");
    return value;
}

std::optional<EventType> parse_tag(std::string_view comment, std::size_t line) {
    const auto pos = comment.find("type=");
    if (pos == std::string_view::npos) return std::nullopt;
    if (pos + 5 >= comment.size()) throw ParseError(line, "empty type tag");
    const char c = comment[pos + 5];
    switch (c) {
        case 'Z': return EventType::Z;
        case 'R': return EventType::R;
        case 'I': return EventType::I;
        case 'H': return EventType::H;
        default: throw ParseError(line, std::string("unknown type tag '") + c + "'");
    }
}

}  // namespace

std::vector<EdgeEvent> parse_events(std::istream& in, const ParseOptions& options) {
    std::vector<EdgeEvent> events;
    std::string line;
    std::size_t line_number = 0;
    double previous_time = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view view = line;
        std::string_view comment;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            comment = view.substr(hash + 1);
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) continue;  // blank or pure comment line

        std::vector<std::string_view> fields;
        while (!view.empty()) {
            const auto tab = view.find('\t');
            fields.push_back(trim(view.substr(0, tab)));
            if (tab == std::string_view::npos) break;
            view.remove_prefix(tab + 1);
        }
        if (fields.size() < 2 || fields.size() > 3)
            throw ParseError(line_number, "expected 2 or 3 tab-separated fields, got " +
                                              std::to_string(fields.size()));
        EdgeEvent event;
        event.timestamp = parse_double(fields[0], line_number);
        event.u = parse_id(fields[1], line_number);
        if (fields.size() == 3) event.v = parse_id(fields[2], line_number);
        event.tag = parse_tag(comment, line_number);
        if (options.strict_timestamps && event.timestamp < previous_time)
            throw ParseError(line_number, "decreasing timestamp");
        previous_time = event.timestamp;
        events.push_back(event);
    }
    return events;
}

void write_event_line(std::ostream& out, const EdgeEvent& event) {
    char buffer[96];
    int len = std::snprintf(buffer, sizeof buffer, "%.17g\t%llu", event.timestamp,
                            static_cast<unsigned long long>(event.u));
    if (event.v)
        len += std::snprintf(buffer + len, sizeof buffer - len, "\t%llu",
                             static_cast<unsigned long long>(*event.v));
    if (event.tag)
        len += std::snprintf(buffer + len, sizeof buffer - len, "\t#type=%c",
                             static_cast<char>(*event.tag));
    buffer[len++] = '\n';
    out.write(buffer, len);
}

void write_events_tsv(std::ostream& out, std::span<const EdgeEvent> events,
                      const std::string& provenance_comment) {
    out << "# " << provenance_comment << '\n';
    for (const EdgeEvent& event : events) write_event_line(out, event);
}

TsvEventWriter::TsvEventWriter(std::ostream& out, const std::string& provenance_comment)
    : out_(out) {
    out_ << "# " << provenance_comment << '\n';
}

void TsvEventWriter::on_event(const EdgeEvent& event) { write_event_line(out_, event); }

StreamReplayer::StreamReplayer(std::size_t first_snapshot_exponent)
    : next_snapshot_(std::size_t{1} << first_snapshot_exponent) {}

NodeId StreamReplayer::intern(std::uint64_t external_id) {
    const auto [it, inserted] = id_map_.try_emplace(external_id, NodeId{0});
    if (inserted) it->second = graph_.add_node();
    return it->second;
}

EventType StreamReplayer::classify(const EdgeEvent& event) const {
    if (!event.is_edge()) return EventType::Z;
    const bool u_known = id_map_.contains(event.u);
    const bool v_known = id_map_.contains(*event.v);
    if (u_known && v_known) return EventType::H;
    if (u_known || v_known) return EventType::I;
    return EventType::R;
}

void StreamReplayer::apply(const EdgeEvent& event) {
    const EventType type = classify(event);
    last_time_ = event.timestamp;

    if (!event.is_edge()) {
        intern(event.u);
        ++window_.z;
    } else if (event.u == *event.v) {
        intern(event.u);
        ++series_.self_loops;
    } else {
        const NodeId u = intern(event.u);
        const NodeId v = intern(*event.v);
        // H-classified edges carry the homophily flag; duplicates are
        // counted but leave the graph unchanged.
        if (!graph_.add_edge(u, v, type == EventType::H)) {
            ++window_duplicates_;
            ++series_.duplicate_edges;
        } else {
            switch (type) {
                case EventType::R: ++window_.r; break;
                case EventType::I: ++window_.i; break;
                case EventType::H: ++window_.h; break;
                case EventType::Z: break;
            }
        }
    }
    ++series_.events_applied;

    while (graph_.node_count() >= next_snapshot_) {
        TrajectoryPoint point;
        point.schedule_n = next_snapshot_;
        point.snapshot = graph_.take_snapshot();
        point.event_time = event.timestamp;
        point.window = window_;
        point.window_duplicates = window_duplicates_;
        series_.totals.z += window_.z;
        series_.totals.r += window_.r;
        series_.totals.i += window_.i;
        series_.totals.h += window_.h;
        point.cumulative = series_.totals;
        point.cumulative_duplicates = series_.duplicate_edges;
        series_.points.push_back(std::move(point));
        window_ = {};
        window_duplicates_ = 0;
        next_snapshot_ *= 2;
    }
}

TrajectorySeries StreamReplayer::take_series() {
    // Fold the unfinished window into the totals.
    series_.totals.z += window_.z;
    series_.totals.r += window_.r;
    series_.totals.i += window_.i;
    series_.totals.h += window_.h;
    window_ = {};
    window_duplicates_ = 0;
    if (graph_.node_count() > 0) series_.final_snapshot = graph_.take_snapshot();
    series_.final_time = last_time_;
    return std::move(series_);
}

TrajectorySeries replay(std::span<const EdgeEvent> events, std::size_t first_snapshot_exponent) {
    if (events.empty()) throw std::invalid_argument("replay: empty event stream");
    StreamReplayer replayer(first_snapshot_exponent);
    for (const EdgeEvent& event : events) replayer.apply(event);
    return replayer.take_series();
}

std::vector<std::pair<std::size_t, double>> nz_series(const TrajectorySeries& trajectory) {
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(trajectory.points.size());
    for (const TrajectoryPoint& point : trajectory.points)
        out.emplace_back(point.snapshot.node_count, point.snapshot.nz_fraction);
    return out;
}

std::vector<EdgeEvent> shuffle_events(std::span<const EdgeEvent> events, std::uint64_t seed,
                                      bool edges_only) {
    std::vector<EdgeEvent> out(events.begin(), events.end());
    Rng rng(seed);
    if (!edges_only) {
        std::vector<double> times;
        times.reserve(out.size());
        for (const EdgeEvent& e : out) times.push_back(e.timestamp);
        std::sort(times.begin(), times.end());
        std::shuffle(out.begin(), out.end(), rng);
        for (std::size_t k = 0; k < out.size(); ++k) out[k].timestamp = times[k];
        return out;
    }
    std::vector<std::size_t> positions;
    std::vector<EdgeEvent> edges;
    std::vector<double> times;
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (out[k].is_edge()) {
            positions.push_back(k);
            edges.push_back(out[k]);
            times.push_back(out[k].timestamp);
        }
    }
    std::sort(times.begin(), times.end());
    std::shuffle(edges.begin(), edges.end(), rng);
    for (std::size_t k = 0; k < positions.size(); ++k) {
        out[positions[k]] = edges[k];
        out[positions[k]].timestamp = times[k];
    }
    return out;
}

namespace {

void write_ratio(std::ostream& out, std::size_t count, std::size_t denom) {
    if (denom == 0)
        out << "nan";
    else
        out << static_cast<double>(count) / static_cast<double>(denom);
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectorySeries& trajectory,
                          std::span<const std::optional<ExponentFitReport>> fits,
                          const std::string& provenance_comment) {
    out << "# " << provenance_comment << '\n';
    out << "n,e,avg_degree,nz,alpha_all,alpha_opt,x_opt,alpha_set_min,alpha_set_max,"
           "ratio_R,ratio_I,ratio_H,ratio_Z\n";
    const auto nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < trajectory.points.size(); ++k) {
        const TrajectoryPoint& point = trajectory.points[k];
        const ExponentFitReport* fit =
            (k < fits.size() && fits[k]) ? &*fits[k] : nullptr;
        out << point.snapshot.node_count << ',' << point.snapshot.edge_count << ','
            << point.snapshot.avg_degree << ',' << point.snapshot.nz_fraction << ','
            << (fit ? fit->alpha_all : nan) << ',' << (fit ? fit->opt.alpha_hat : nan) << ','
            << (fit ? fit->opt.xmin : nan) << ',' << (fit ? fit->alpha_set_min() : nan) << ','
            << (fit ? fit->alpha_set_max() : nan) << ',';
        const std::size_t edges = point.window.edge_total();
        write_ratio(out, point.window.r, edges);
        out << ',';
        write_ratio(out, point.window.i, edges);
        out << ',';
        write_ratio(out, point.window.h, edges);
        out << ',';
        write_ratio(out, point.window.z, point.window.total());
        out << '\n';
    }
}

void write_distribution_csv(std::ostream& out, const TrajectorySeries& trajectory,
                            double bin_base, const std::string& provenance_comment) {
    out << "# " << provenance_comment << '\n';
    out << "snapshot_n,bin_low,bin_high,density\n";
    for (const TrajectoryPoint& point : trajectory.points) {
        if (point.snapshot.degree_histogram.empty()) continue;
        const BinnedDistribution dist =
            log_binned_distribution(point.snapshot.degree_histogram, bin_base);
        for (const auto& bin : dist.bins)
            out << point.snapshot.node_count << ',' << bin.lower << ',' << bin.upper << ','
                << bin.density << '\n';
    }
}

}  // namespace netgrow
