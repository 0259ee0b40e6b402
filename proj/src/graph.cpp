#include "netgrow/graph.hpp"

#include <stdexcept>

namespace netgrow {

namespace detail {

std::uint64_t EdgeKeySet::mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

void EdgeKeySet::grow(std::size_t capacity) {
    std::size_t slots = 16;
    while (slots < 2 * capacity) slots *= 2;
    std::vector<std::uint64_t> old = std::move(slots_);
    slots_.assign(slots, 0);
    mask_ = slots - 1;
    for (std::uint64_t key : old) {
        if (key == 0) continue;
        std::size_t at = mix(key) & mask_;
        while (slots_[at] != 0) at = (at + 1) & mask_;
        slots_[at] = key;
    }
}

void EdgeKeySet::reserve(std::size_t expected) {
    if (2 * expected > slots_.size()) grow(expected);
}

bool EdgeKeySet::insert(std::uint64_t key) {
    if (2 * (size_ + 1) > slots_.size()) grow(size_ + 1);
    std::size_t at = mix(key) & mask_;
    while (slots_[at] != 0) {
        if (slots_[at] == key) return false;
        at = (at + 1) & mask_;
    }
    slots_[at] = key;
    ++size_;
    return true;
}

bool EdgeKeySet::contains(std::uint64_t key) const {
    if (slots_.empty()) return false;
    std::size_t at = mix(key) & mask_;
    while (slots_[at] != 0) {
        if (slots_[at] == key) return true;
        at = (at + 1) & mask_;
    }
    return false;
}

}  // namespace detail

std::uint64_t DynamicGraph::edge_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

void DynamicGraph::reserve(std::size_t nodes, std::size_t edges) {
    degree_.reserve(nodes);
    homophily_degree_.reserve(nodes);
    adjacency_.reserve(nodes);
    endpoint_bag_.reserve(2 * edges);
    edge_keys_.reserve(edges);
}

NodeId DynamicGraph::add_node() {
    const NodeId id = static_cast<NodeId>(degree_.size());
    degree_.push_back(0);
    homophily_degree_.push_back(0);
    adjacency_.emplace_back();
    return id;
}

bool DynamicGraph::has_edge(NodeId u, NodeId v) const {
    if (u == v) return false;
    return edge_keys_.contains(edge_key(u, v));
}

bool DynamicGraph::add_edge(NodeId u, NodeId v, bool homophily) {
    if (!has_node(u) || !has_node(v))
        throw std::out_of_range("add_edge: endpoint does not exist");
    if (u == v) return false;
    if (!edge_keys_.insert(edge_key(u, v))) return false;

    for (NodeId x : {u, v}) {
        if (degree_[x] == 0) ++nonzero_count_;
        ++degree_[x];
        if (degree_[x] > max_degree_) max_degree_ = degree_[x];
        endpoint_bag_.push_back(x);
        if (homophily) {
            ++homophily_degree_[x];
            homophily_endpoint_bag_.push_back(x);
        }
    }
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
    ++edge_count_;
    if (homophily) ++homophily_edge_count_;
    return true;
}

NodeId DynamicGraph::preferential_sample(Rng& rng) const {
    if (endpoint_bag_.empty())
        throw std::logic_error("preferential_sample: graph has no edges");
    return endpoint_bag_[detail::pick_index(rng, endpoint_bag_.size())];
}

NodeId DynamicGraph::homophily_sample(Rng& rng) const {
    if (homophily_endpoint_bag_.empty())
        throw std::logic_error("homophily_sample: graph has no homophily edges");
    return homophily_endpoint_bag_[detail::pick_index(rng, homophily_endpoint_bag_.size())];
}

NodeId DynamicGraph::uniform_sample(Rng& rng) const {
    if (degree_.empty()) throw std::logic_error("uniform_sample: empty graph");
    return static_cast<NodeId>(detail::pick_index(rng, degree_.size()));
}

Snapshot DynamicGraph::take_snapshot() const {
    if (degree_.empty()) throw std::logic_error("take_snapshot: empty graph");
    Snapshot snap;
    snap.node_count = degree_.size();
    snap.edge_count = edge_count_;
    snap.avg_degree = 2.0 * static_cast<double>(edge_count_) / static_cast<double>(snap.node_count);
    snap.nz_fraction = static_cast<double>(nonzero_count_) / static_cast<double>(snap.node_count);
    for (std::uint32_t d : degree_)
        if (d > 0) ++snap.degree_histogram[d];
    return snap;
}

}  // namespace netgrow
