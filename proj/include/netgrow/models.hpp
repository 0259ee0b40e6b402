#pragma once

#include <cstdint>

#include "netgrow/events.hpp"

namespace netgrow {

// Random-plus-homophily growth: random edges appear at rate r per node
// (each bringing two new nodes), homophily edges at rate s per unit of
// homophily degree, with preferential target selection.
struct ModelIParams {
    double r = 0.05;       // random-edge rate
    double s = 0.075;      // homophily rate
    std::size_t n0 = 20;   // initial node count
    std::size_t h0 = 2;    // initial homophily edge count
    void validate() const;
};

// Model I extended with influenced nodes (rate p per node, one edge to a
// uniform existing node) and isolated root nodes (rate q per node).
// Reduces to Model I when p = q = 0.
struct ModelIIParams {
    double p = 0.0;
    double q = 0.0;
    double r = 0.05;
    double s = 0.075;
    std::size_t n0 = 20;
    std::size_t h0 = 2;
    void validate() const;
};

struct SimulationStats {
    std::size_t events_emitted = 0;
    // Edges dropped to preserve the simple graph (self-pair or already
    // present after the retry budget).
    std::size_t skipped_edges = 0;
};

// Continuous-time race simulation: channel rates lambda_R = r n,
// lambda_H = 2 s e_h (plus lambda_I = p n, lambda_Z = q n for Model II);
// exponential waits at the total rate, channel chosen proportionally.
// Initialization places n0 isolated nodes and h0 homophily edges between
// uniformly chosen distinct pairs. Stops when n >= target_n.
SimulationStats simulate_model_i(const ModelIParams& params, std::size_t target_n,
                                 std::uint64_t seed, EventSink& sink);
EventLog simulate_model_i(const ModelIParams& params, std::size_t target_n, std::uint64_t seed);

SimulationStats simulate_model_ii(const ModelIIParams& params, std::size_t target_n,
                                  std::uint64_t seed, EventSink& sink);
EventLog simulate_model_ii(const ModelIIParams& params, std::size_t target_n, std::uint64_t seed);

struct CurveParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Closed-form growth-law parameters of Model II:
// a = 2(r+p)/D, b = 2s/D - 1, c = 2 H0 / N0^(2s/D) with D = p + q + 2r.
CurveParams model_ii_curve_params(const ModelIIParams& params);

// Model I closed form d(n) = 1 + (2 H0 / N0^(s/r)) n^(s/r - 1).
double predicted_avg_degree_model_i(const ModelIParams& params, double n);

struct EdgeFractions {
    double random_fraction = 0.0;
    double homophily_fraction = 0.0;
};

// Fractions of random vs homophily edges at time t, from the closed forms
// e_r(t) = N0/2 e^(2rt) and e_h(t) = H0 e^(2st).
EdgeFractions predicted_edge_fractions(const ModelIParams& params, double t);

// Recovers Model II parameters from fitted (a, b, c) under the conventions
// (total node-event rate D = p + q + 2r, h0, r):
// s = (b+1) D/2, N0 = round((2 h0 / c)^(1/(b+1))), p = a D/2 - r,
// q = D - p - 2r. Throws std::invalid_argument when the conventions are
// infeasible (negative p or q, or N0 < 2).
ModelIIParams invert_model_ii(double a, double b, double c, double total_rate, double r,
                              std::size_t h0);

// Baseline generators (fixed-exponent references). Timestamps are event
// indices; tags match the replay classifier.

// Each step: one new node with m distinct preferential edges, seeded by a
// path on m+1 nodes.
SimulationStats simulate_barabasi_albert(std::size_t m, std::size_t target_n,
                                         std::uint64_t seed, EventSink& sink);
EventLog simulate_barabasi_albert(std::size_t m, std::size_t target_n, std::uint64_t seed);

// Each step: one new node with c_rate preferential edges, then c_rate edges
// between preferentially chosen existing pairs.
SimulationStats simulate_dorogovtsev(std::size_t c_rate, std::size_t target_n,
                                     std::uint64_t seed, EventSink& sink);
EventLog simulate_dorogovtsev(std::size_t c_rate, std::size_t target_n, std::uint64_t seed);

// Triangle closing: with probability 1-u a new node joins a uniform random
// node; with probability u a uniform random length-2 path is closed.
SimulationStats simulate_vazquez(double u, std::size_t target_steps, std::uint64_t seed,
                                 EventSink& sink);
EventLog simulate_vazquez(double u, std::size_t target_steps, std::uint64_t seed);

// Vertex copying: a new node copies each edge of a uniform ambassador with
// probability q_copy, otherwise connects to a uniform random node.
SimulationStats simulate_vertex_copying(double q_copy, std::size_t target_n,
                                        std::uint64_t seed, EventSink& sink);
EventLog simulate_vertex_copying(double q_copy, std::size_t target_n, std::uint64_t seed);

}  // namespace netgrow
