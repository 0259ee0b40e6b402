#include "netgrow/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "netgrow/graph.hpp"

namespace netgrow {

namespace {

constexpr double kInitialEventSpacing = 1e-9;
constexpr int kEdgeRetries = 100;

void emit(EventSink& sink, SimulationStats& stats, double t, NodeId u, EventType tag) {
    sink.on_event(EdgeEvent{t, u, std::nullopt, tag});
    ++stats.events_emitted;
}

void emit(EventSink& sink, SimulationStats& stats, double t, NodeId u, NodeId v,
          EventType tag) {
    sink.on_event(EdgeEvent{t, u, v, tag});
    ++stats.events_emitted;
}

double advance(double t, double wait) {
    const double next = t + wait;
    if (next > t) return next;
    return std::nextafter(t, std::numeric_limits<double>::infinity());
}

void validate_growth(double p, double q, double r, double s, std::size_t n0, std::size_t h0) {
    if (p < 0.0 || q < 0.0) throw std::invalid_argument("rates p, q must be nonnegative");
    if (r <= 0.0) throw std::invalid_argument("random-edge rate r must be positive");
    if (s <= 0.0) throw std::invalid_argument("homophily rate s must be positive");
    if (n0 < 2) throw std::invalid_argument("initial node count must be at least 2");
    if (h0 < 1) throw std::invalid_argument("initial homophily edge count must be at least 1");
    if (h0 > n0 * (n0 - 1) / 2)
        throw std::invalid_argument("too many initial homophily edges for n0 nodes");
}

SimulationStats simulate_growth(const ModelIIParams& params, std::size_t target_n,
                                std::uint64_t seed, EventSink& sink) {
    params.validate();
    if (target_n <= params.n0)
        throw std::invalid_argument("target_n must exceed the initial node count");

    DynamicGraph graph;
    graph.reserve(target_n + 2, 4 * target_n);
    Rng rng(seed);
    SimulationStats stats;
    double t = 0.0;

    for (std::size_t k = 0; k < params.n0; ++k) {
        const NodeId u = graph.add_node();
        emit(sink, stats, t, u, EventType::Z);
        t += kInitialEventSpacing;
    }
    std::uniform_int_distribution<NodeId> initial(0, static_cast<NodeId>(params.n0 - 1));
    std::size_t placed = 0;
    while (placed < params.h0) {
        const NodeId u = initial(rng);
        const NodeId v = initial(rng);
        if (u == v || graph.has_edge(u, v)) continue;
        graph.add_edge(u, v, true);
        emit(sink, stats, t, u, v, EventType::H);
        t += kInitialEventSpacing;
        ++placed;
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    while (graph.node_count() < target_n) {
        const double n = static_cast<double>(graph.node_count());
        const double lam_r = params.r * n;
        const double lam_i = params.p * n;
        const double lam_z = params.q * n;
        const double lam_h = 2.0 * params.s * static_cast<double>(graph.homophily_edge_count());
        const double total = lam_r + lam_i + lam_z + lam_h;

        t = advance(t, std::exponential_distribution<double>(total)(rng));
        const double pick = unit(rng) * total;
        if (pick < lam_r) {
            const NodeId u = graph.add_node();
            const NodeId v = graph.add_node();
            graph.add_edge(u, v);
            emit(sink, stats, t, u, v, EventType::R);
        } else if (pick < lam_r + lam_i) {
            const NodeId influencer = graph.uniform_sample(rng);
            const NodeId u = graph.add_node();
            graph.add_edge(u, influencer);
            emit(sink, stats, t, u, influencer, EventType::I);
        } else if (pick < lam_r + lam_i + lam_z) {
            const NodeId u = graph.add_node();
            emit(sink, stats, t, u, EventType::Z);
        } else {
            const NodeId source = graph.homophily_sample(rng);
            bool placed_edge = false;
            for (int attempt = 0; attempt < kEdgeRetries; ++attempt) {
                const NodeId target = graph.preferential_sample(rng);
                if (target == source || graph.has_edge(source, target)) continue;
                graph.add_edge(source, target, true);
                emit(sink, stats, t, source, target, EventType::H);
                placed_edge = true;
                break;
            }
            if (!placed_edge) ++stats.skipped_edges;
        }
    }
    return stats;
}

std::vector<std::pair<std::string, double>> model_param_list(const ModelIIParams& p,
                                                             bool with_pq) {
    std::vector<std::pair<std::string, double>> out;
    if (with_pq) {
        out.emplace_back("p", p.p);
        out.emplace_back("q", p.q);
    }
    out.emplace_back("r", p.r);
    out.emplace_back("s", p.s);
    out.emplace_back("N0", static_cast<double>(p.n0));
    out.emplace_back("H0", static_cast<double>(p.h0));
    return out;
}

}  // namespace

void ModelIParams::validate() const { validate_growth(0.0, 0.0, r, s, n0, h0); }

void ModelIIParams::validate() const { validate_growth(p, q, r, s, n0, h0); }

SimulationStats simulate_model_i(const ModelIParams& params, std::size_t target_n,
                                 std::uint64_t seed, EventSink& sink) {
    return simulate_growth(ModelIIParams{0.0, 0.0, params.r, params.s, params.n0, params.h0},
                           target_n, seed, sink);
}

EventLog simulate_model_i(const ModelIParams& params, std::size_t target_n,
                          std::uint64_t seed) {
    EventLogCollector collector;
    simulate_model_i(params, target_n, seed, collector);
    ModelIIParams full{0.0, 0.0, params.r, params.s, params.n0, params.h0};
    return EventLog{{"model1", model_param_list(full, false), seed},
                    std::move(collector.events)};
}

SimulationStats simulate_model_ii(const ModelIIParams& params, std::size_t target_n,
                                  std::uint64_t seed, EventSink& sink) {
    return simulate_growth(params, target_n, seed, sink);
}

EventLog simulate_model_ii(const ModelIIParams& params, std::size_t target_n,
                           std::uint64_t seed) {
    EventLogCollector collector;
    simulate_model_ii(params, target_n, seed, collector);
    return EventLog{{"model2", model_param_list(params, true), seed},
                    std::move(collector.events)};
}

CurveParams model_ii_curve_params(const ModelIIParams& params) {
    params.validate();
    const double d_rate = params.p + params.q + 2.0 * params.r;
    CurveParams out;
    out.a = 2.0 * (params.r + params.p) / d_rate;
    out.b = 2.0 * params.s / d_rate - 1.0;
    out.c = 2.0 * static_cast<double>(params.h0) /
            std::pow(static_cast<double>(params.n0), 2.0 * params.s / d_rate);
    return out;
}

double predicted_avg_degree_model_i(const ModelIParams& params, double n) {
    params.validate();
    const double ratio = params.s / params.r;
    return 1.0 + 2.0 * static_cast<double>(params.h0) /
                     std::pow(static_cast<double>(params.n0), ratio) *
                     std::pow(n, ratio - 1.0);
}

EdgeFractions predicted_edge_fractions(const ModelIParams& params, double t) {
    params.validate();
    if (t < 0.0) throw std::invalid_argument("predicted_edge_fractions: t must be nonnegative");
    // e_r/(e_r + e_h) with e_r = N0/2 e^(2rt), e_h = H0 e^(2st).
    const double ratio = 2.0 * static_cast<double>(params.h0) /
                         static_cast<double>(params.n0) *
                         std::exp(2.0 * (params.s - params.r) * t);
    EdgeFractions out;
    out.random_fraction = 1.0 / (1.0 + ratio);
    out.homophily_fraction = 1.0 - out.random_fraction;
    return out;
}

ModelIIParams invert_model_ii(double a, double b, double c, double total_rate, double r,
                              std::size_t h0) {
    if (a <= 0.0 || a >= 2.0) throw std::invalid_argument("invert_model_ii: a must be in (0, 2)");
    if (b <= 0.0) throw std::invalid_argument("invert_model_ii: b must be positive");
    if (c <= 0.0) throw std::invalid_argument("invert_model_ii: c must be positive");
    if (total_rate <= 0.0) throw std::invalid_argument("invert_model_ii: D must be positive");
    if (h0 < 1) throw std::invalid_argument("invert_model_ii: H0 must be at least 1");

    ModelIIParams params;
    params.r = r;
    params.s = (b + 1.0) * total_rate / 2.0;
    params.h0 = h0;

    const double n0_real =
        std::pow(2.0 * static_cast<double>(h0) / c, 1.0 / (b + 1.0));
    const double n0_rounded = std::round(n0_real);
    if (!(n0_rounded >= 2.0) || n0_rounded > 1e12)
        throw std::invalid_argument("invert_model_ii: implied N0 out of range");
    params.n0 = static_cast<std::size_t>(n0_rounded);

    double p = a * total_rate / 2.0 - r;
    if (p < 0.0 && p > -1e-12) p = 0.0;
    double q = total_rate - p - 2.0 * r;
    if (q < 0.0 && q > -1e-9) q = 0.0;
    if (p < 0.0)
        throw std::invalid_argument("invert_model_ii: conventions give negative p (r too large)");
    if (q < 0.0)
        throw std::invalid_argument("invert_model_ii: conventions give negative q");
    params.p = p;
    params.q = q;
    params.validate();
    return params;
}

namespace {

// Adds target_count distinct preferential edges from a fresh node; tags the
// first I and the rest H, matching the replay classifier.
void attach_preferential(DynamicGraph& graph, Rng& rng, EventSink& sink,
                         SimulationStats& stats, double& t, NodeId fresh,
                         std::size_t target_count) {
    std::size_t added = 0;
    int attempts = 0;
    while (added < target_count) {
        if (++attempts > 100000)
            throw std::logic_error("preferential attachment: cannot place distinct edges");
        const NodeId target = graph.preferential_sample(rng);
        if (target == fresh || graph.has_edge(fresh, target)) continue;
        graph.add_edge(fresh, target);
        emit(sink, stats, t, fresh, target, added == 0 ? EventType::I : EventType::H);
        t += 1.0;
        ++added;
    }
}

void seed_path(DynamicGraph& graph, EventSink& sink, SimulationStats& stats, double& t,
               std::size_t node_count) {
    graph.add_node();
    for (std::size_t k = 1; k < node_count; ++k) {
        const NodeId u = graph.add_node();
        graph.add_edge(u - 1, u);
        emit(sink, stats, t, u - 1, u, k == 1 ? EventType::R : EventType::I);
        t += 1.0;
    }
}

}  // namespace

SimulationStats simulate_barabasi_albert(std::size_t m, std::size_t target_n,
                                         std::uint64_t seed, EventSink& sink) {
    if (m < 1) throw std::invalid_argument("simulate_barabasi_albert: m must be >= 1");
    if (target_n <= m + 1)
        throw std::invalid_argument("simulate_barabasi_albert: target_n must exceed m+1");
    DynamicGraph graph;
    graph.reserve(target_n, m * target_n);
    Rng rng(seed);
    SimulationStats stats;
    double t = 0.0;
    seed_path(graph, sink, stats, t, m + 1);
    while (graph.node_count() < target_n) {
        const NodeId u = graph.add_node();
        attach_preferential(graph, rng, sink, stats, t, u, m);
    }
    return stats;
}

EventLog simulate_barabasi_albert(std::size_t m, std::size_t target_n, std::uint64_t seed) {
    EventLogCollector collector;
    simulate_barabasi_albert(m, target_n, seed, collector);
    return EventLog{{"ba", {{"m", static_cast<double>(m)}}, seed}, std::move(collector.events)};
}

SimulationStats simulate_dorogovtsev(std::size_t c_rate, std::size_t target_n,
                                     std::uint64_t seed, EventSink& sink) {
    if (c_rate < 1) throw std::invalid_argument("simulate_dorogovtsev: c_rate must be >= 1");
    const std::size_t seed_nodes = std::max<std::size_t>(2, c_rate + 1);
    if (target_n <= seed_nodes)
        throw std::invalid_argument("simulate_dorogovtsev: target_n too small");
    DynamicGraph graph;
    graph.reserve(target_n, 2 * c_rate * target_n);
    Rng rng(seed);
    SimulationStats stats;
    double t = 0.0;
    seed_path(graph, sink, stats, t, seed_nodes);
    while (graph.node_count() < target_n) {
        const NodeId u = graph.add_node();
        attach_preferential(graph, rng, sink, stats, t, u, c_rate);
        // c additional edges between existing nodes, both ends preferential.
        for (std::size_t k = 0; k < c_rate; ++k) {
            bool placed = false;
            for (int attempt = 0; attempt < kEdgeRetries; ++attempt) {
                const NodeId v = graph.preferential_sample(rng);
                const NodeId w = graph.preferential_sample(rng);
                if (v == w || graph.has_edge(v, w)) continue;
                graph.add_edge(v, w);
                emit(sink, stats, t, v, w, EventType::H);
                t += 1.0;
                placed = true;
                break;
            }
            if (!placed) ++stats.skipped_edges;
        }
    }
    return stats;
}

EventLog simulate_dorogovtsev(std::size_t c_rate, std::size_t target_n, std::uint64_t seed) {
    EventLogCollector collector;
    simulate_dorogovtsev(c_rate, target_n, seed, collector);
    return EventLog{{"dorogovtsev", {{"c", static_cast<double>(c_rate)}}, seed},
                    std::move(collector.events)};
}

SimulationStats simulate_vazquez(double u, std::size_t target_steps, std::uint64_t seed,
                                 EventSink& sink) {
    if (u < 0.0 || u > 1.0)
        throw std::invalid_argument("simulate_vazquez: u must lie in [0, 1]");
    DynamicGraph graph;
    Rng rng(seed);
    SimulationStats stats;
    double t = 0.0;
    seed_path(graph, sink, stats, t, 2);

    std::bernoulli_distribution close_triangle(u);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t step = 0; step < target_steps; ++step) {
        bool placed = false;
        if (close_triangle(rng) && graph.max_degree() >= 2) {
            // Uniform length-2 path: middle drawn proportional to d(d-1) by
            // rejection, then a uniform unordered pair of its neighbors.
            for (int attempt = 0; attempt < kEdgeRetries && !placed; ++attempt) {
                NodeId mid = 0;
                bool have_mid = false;
                for (int trial = 0; trial < 2 * kEdgeRetries; ++trial) {
                    const NodeId cand = graph.preferential_sample(rng);
                    const double accept = static_cast<double>(graph.degree(cand) - 1) /
                                          static_cast<double>(graph.max_degree() - 1);
                    if (accept > 0.0 && unit(rng) < accept) {
                        mid = cand;
                        have_mid = true;
                        break;
                    }
                }
                if (!have_mid) break;
                const auto& nbrs = graph.neighbors(mid);
                std::uniform_int_distribution<std::size_t> first(0, nbrs.size() - 1);
                std::uniform_int_distribution<std::size_t> second(0, nbrs.size() - 2);
                const std::size_t i = first(rng);
                std::size_t j = second(rng);
                if (j >= i) ++j;
                const NodeId a = nbrs[i];
                const NodeId b = nbrs[j];
                if (graph.has_edge(a, b)) continue;
                graph.add_edge(a, b);
                emit(sink, stats, t, a, b, EventType::H);
                t += 1.0;
                placed = true;
            }
        }
        if (!placed) {
            const NodeId target = graph.uniform_sample(rng);
            const NodeId fresh = graph.add_node();
            graph.add_edge(fresh, target);
            emit(sink, stats, t, fresh, target, EventType::I);
            t += 1.0;
        }
    }
    return stats;
}

EventLog simulate_vazquez(double u, std::size_t target_steps, std::uint64_t seed) {
    EventLogCollector collector;
    simulate_vazquez(u, target_steps, seed, collector);
    return EventLog{{"vazquez", {{"u", u}}, seed}, std::move(collector.events)};
}

SimulationStats simulate_vertex_copying(double q_copy, std::size_t target_n,
                                        std::uint64_t seed, EventSink& sink) {
    if (q_copy < 0.0 || q_copy > 1.0)
        throw std::invalid_argument("simulate_vertex_copying: q_copy must lie in [0, 1]");
    if (target_n <= 2)
        throw std::invalid_argument("simulate_vertex_copying: target_n must exceed 2");
    DynamicGraph graph;
    Rng rng(seed);
    SimulationStats stats;
    double t = 0.0;
    seed_path(graph, sink, stats, t, 2);

    std::bernoulli_distribution copy_edge(q_copy);
    while (graph.node_count() < target_n) {
        const std::size_t existing = graph.node_count();
        const NodeId ambassador = graph.uniform_sample(rng);
        const std::vector<NodeId> connections = graph.neighbors(ambassador);
        const NodeId fresh = graph.add_node();
        std::uniform_int_distribution<NodeId> any(0, static_cast<NodeId>(existing - 1));
        bool first_edge = true;
        for (const NodeId neighbor : connections) {
            const NodeId target = copy_edge(rng) ? neighbor : any(rng);
            if (!graph.add_edge(fresh, target)) {
                ++stats.skipped_edges;
                continue;
            }
            emit(sink, stats, t, fresh, target, first_edge ? EventType::I : EventType::H);
            t += 1.0;
            first_edge = false;
        }
        if (first_edge) {
            // Ambassador had no connections: the node arrives isolated.
            emit(sink, stats, t, fresh, EventType::Z);
            t += 1.0;
        }
    }
    return stats;
}

EventLog simulate_vertex_copying(double q_copy, std::size_t target_n, std::uint64_t seed) {
    EventLogCollector collector;
    simulate_vertex_copying(q_copy, target_n, seed, collector);
    return EventLog{{"copying", {{"q", q_copy}}, seed}, std::move(collector.events)};
}

}  // namespace netgrow
