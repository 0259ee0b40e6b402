#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace netgrow {

// Node ids are dense: assigned consecutively in creation order, never reused.
using NodeId = std::uint32_t;

// Default RNG for everything in this library. One engine per simulation;
// independent runs use independent engines.
using Rng = std::mt19937_64;

// Read-only view of the graph state at a moment in time. The histogram
// covers nonzero-degree nodes only; its counts sum to nz.
struct Snapshot {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double avg_degree = 0.0;   // 2e/n
    double nz_fraction = 0.0;  // |{i : d(i) >= 1}| / n
    std::map<std::uint32_t, std::size_t> degree_histogram;
};

namespace detail {

// Open-addressing hash set of packed edge keys. Keys are never zero (the
// packed form orders endpoints strictly), so zero marks empty slots.
// Insert-only, load factor kept at 1/2; edge-existence checks sit on the
// simulators' hot path.
class EdgeKeySet {
public:
    void reserve(std::size_t expected);
    bool insert(std::uint64_t key);        // false when already present
    bool contains(std::uint64_t key) const;
    std::size_t size() const { return size_; }

private:
    static std::uint64_t mix(std::uint64_t x);
    void grow(std::size_t capacity);

    std::vector<std::uint64_t> slots_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
};

// Unbiased-enough uniform index draw (bias below size/2^64) without the
// per-call division of uniform_int_distribution.
inline std::size_t pick_index(std::mt19937_64& rng, std::size_t size) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(rng()) * size) >> 64);
}

}  // namespace detail

// Growing undirected simple graph with O(1) degree-proportional sampling.
//
// Degree-proportional sampling draws uniformly from an endpoint multiset in
// which node j appears d(j) times; a second multiset tracks homophily
// degrees d_h(j), counting only edges inserted with the homophily flag.
// Nodes and edges are never deleted.
class DynamicGraph {
public:
    DynamicGraph() = default;

    // Appends a new isolated node and returns its id (== previous node count).
    NodeId add_node();

    // Inserts the undirected edge {u, v}. Returns false (state unchanged)
    // for self-loops and already-present edges. Throws std::out_of_range if
    // either endpoint does not exist. When homophily is set, the homophily
    // degree of both endpoints is incremented as well.
    bool add_edge(NodeId u, NodeId v, bool homophily = false);

    bool has_node(NodeId u) const { return u < degree_.size(); }
    bool has_edge(NodeId u, NodeId v) const;

    std::size_t node_count() const { return degree_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    std::size_t homophily_edge_count() const { return homophily_edge_count_; }
    std::size_t nonzero_degree_count() const { return nonzero_count_; }

    std::uint32_t degree(NodeId u) const { return degree_.at(u); }
    std::uint32_t homophily_degree(NodeId u) const { return homophily_degree_.at(u); }
    std::uint32_t max_degree() const { return max_degree_; }
    const std::vector<NodeId>& neighbors(NodeId u) const { return adjacency_.at(u); }

    // Returns node j with probability d(j)/2e. Throws std::logic_error when
    // the graph has no edges (no sampling mass).
    NodeId preferential_sample(Rng& rng) const;

    // Returns node j with probability d_h(j)/2e_h. Throws std::logic_error
    // when no homophily edges exist.
    NodeId homophily_sample(Rng& rng) const;

    // Uniform over all existing nodes. Throws std::logic_error when empty.
    NodeId uniform_sample(Rng& rng) const;

    // Throws std::logic_error on an empty graph.
    Snapshot take_snapshot() const;

    void reserve(std::size_t nodes, std::size_t edges);

private:
    static std::uint64_t edge_key(NodeId u, NodeId v);

    std::vector<std::uint32_t> degree_;
    std::vector<std::uint32_t> homophily_degree_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<NodeId> endpoint_bag_;
    std::vector<NodeId> homophily_endpoint_bag_;
    detail::EdgeKeySet edge_keys_;
    std::size_t edge_count_ = 0;
    std::size_t homophily_edge_count_ = 0;
    std::size_t nonzero_count_ = 0;
    std::uint32_t max_degree_ = 0;
};

}  // namespace netgrow
