#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace skyway {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (bad JSON, wrong field types).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally well-formed input that violates a network invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double euclidean(Point a, Point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct Node {
    int id = 0;
    double x = 0.0;
    double y = 0.0;

    Point pos() const { return {x, y}; }
};

/// Undirected skyway segment. cost and battery are carried data; the
/// routing algorithms consume only length.
struct Edge {
    int u = 0;
    int v = 0;
    double length = 0.0;
    double cost = 0.0;
    double battery = 0.0;
};

struct DroneProfile {
    std::string id;
    double battery_capacity = 0.0;
    double payload_capacity = 0.0;
};

struct GenParams {
    std::uint32_t num_nodes = 100;
    std::uint32_t max_connectivity = 5;
    double network_size = 1000.0;
    double neighbor_radius_frac = 0.1;
    std::uint64_t seed = 0;
};

struct BBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

/// Immutable undirected geometric graph. Node ids are arbitrary ints;
/// adjacency is kept symmetric by construction. Safe for concurrent
/// read-only access.
class SkywayNetwork {
public:
    struct Neighbor {
        int node = 0;
        double length = 0.0;
        double cost = 0.0;
        double battery = 0.0;
    };

    /// Validates ids, coordinates and edge geometry; throws ValidationError.
    SkywayNetwork(std::vector<Node> nodes, std::vector<Edge> edges,
                  std::uint64_t seed = 0);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    bool has_node(int id) const { return index_.count(id) != 0; }
    const Node& node(int id) const;
    std::size_t index_of(int id) const;

    std::span<const Neighbor> neighbors(int id) const;
    bool has_edge(int u, int v) const;
    double edge_length(int u, int v) const;

    BBox bbox() const { return bbox_; }
    /// max(bbox width, bbox height)
    double network_size() const { return network_size_; }
    std::uint64_t seed() const { return seed_; }

private:
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::unordered_map<int, std::size_t> index_;
    std::vector<std::vector<Neighbor>> adjacency_;
    BBox bbox_{};
    double network_size_ = 0.0;
    std::uint64_t seed_ = 0;
};

/// Read-only view of a network with at most one edge masked out. Shares
/// the base network without copying; cheap to copy and pass by value.
class NetworkView {
public:
    explicit NetworkView(const SkywayNetwork& net) : net_(&net) {}
    NetworkView(const SkywayNetwork& net, int failed_u, int failed_v);

    const SkywayNetwork& base() const { return *net_; }
    bool has_failed_edge() const { return failed_u_ >= 0; }
    std::pair<int, int> failed_edge() const { return {failed_u_, failed_v_}; }

    bool edge_present(int u, int v) const;
    std::size_t num_edges() const {
        return net_->num_edges() - (has_failed_edge() ? 1 : 0);
    }

    template <class F>
    void for_each_neighbor(int id, F&& f) const {
        for (const auto& nb : net_->neighbors(id)) {
            if (masked(id, nb.node)) continue;
            f(nb);
        }
    }

    std::vector<SkywayNetwork::Neighbor> neighbors_of(int id) const;

private:
    bool masked(int u, int v) const {
        return (u == failed_u_ && v == failed_v_) ||
               (u == failed_v_ && v == failed_u_);
    }

    const SkywayNetwork* net_;
    int failed_u_ = -1;
    int failed_v_ = -1;
};

/// View of net with the undirected edge (u, v) removed. Throws Error if
/// the edge does not exist.
NetworkView with_failed_edge(const SkywayNetwork& net, int u, int v);

}  // namespace skyway
