#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace netgrow {

// Growth event classes: Z root node, R random edge between two
// new nodes, I new node joining an existing one, H edge between existing nodes.
enum class EventType : char { Z = 'Z', R = 'R', I = 'I', H = 'H' };

// One timestamped growth event: either a node-only arrival (v absent) or an
// undirected edge. Node ids are free-form (real streams carry sparse ids);
// generators emit dense ids. The tag is the generator's annotation.
struct EdgeEvent {
    double timestamp = 0.0;
    std::uint64_t u = 0;
    std::optional<std::uint64_t> v;
    std::optional<EventType> tag;

    bool is_edge() const { return v.has_value(); }
};

struct EventLogHeader {
    std::string model;
    std::vector<std::pair<std::string, double>> params;
    std::uint64_t seed = 0;
};

// Totally ordered event sequence with its generating configuration.
struct EventLog {
    EventLogHeader header;
    std::vector<EdgeEvent> events;
};

// Consumer interface so that generators can stream events without
// materializing the full log (large runs feed analyzers directly).
class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void on_event(const EdgeEvent& event) = 0;
};

class EventLogCollector final : public EventSink {
public:
    void on_event(const EdgeEvent& event) override { events.push_back(event); }
    std::vector<EdgeEvent> events;
};

}  // namespace netgrow
