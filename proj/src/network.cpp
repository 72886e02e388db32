#include "skyway/network.hpp"

#include <algorithm>
#include <limits>

namespace skyway {

namespace {

std::string edge_name(int u, int v) {
    return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

}  // namespace

SkywayNetwork::SkywayNetwork(std::vector<Node> nodes, std::vector<Edge> edges,
                             std::uint64_t seed)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), seed_(seed) {
    if (nodes_.empty()) {
        throw ValidationError("network has no nodes");
    }

    index_.reserve(nodes_.size());
    bbox_ = {std::numeric_limits<double>::infinity(),
             std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
            throw ValidationError("node " + std::to_string(n.id) +
                                  " has non-finite coordinates");
        }
        if (!index_.emplace(n.id, i).second) {
            throw ValidationError("duplicate node id " + std::to_string(n.id));
        }
        bbox_.min_x = std::min(bbox_.min_x, n.x);
        bbox_.min_y = std::min(bbox_.min_y, n.y);
        bbox_.max_x = std::max(bbox_.max_x, n.x);
        bbox_.max_y = std::max(bbox_.max_y, n.y);
    }
    network_size_ = std::max(bbox_.width(), bbox_.height());

    adjacency_.resize(nodes_.size());
    std::unordered_map<long long, bool> seen_pairs;
    seen_pairs.reserve(edges_.size());
    for (const Edge& e : edges_) {
        if (e.u == e.v) {
            throw ValidationError("self-loop edge at node " +
                                  std::to_string(e.u));
        }
        auto iu = index_.find(e.u);
        auto iv = index_.find(e.v);
        if (iu == index_.end() || iv == index_.end()) {
            throw ValidationError("edge " + edge_name(e.u, e.v) +
                                  " references unknown node");
        }
        const int lo = std::min(e.u, e.v);
        const int hi = std::max(e.u, e.v);
        const long long key =
            (static_cast<long long>(lo) << 32) ^ static_cast<unsigned>(hi);
        if (!seen_pairs.emplace(key, true).second) {
            throw ValidationError("duplicate edge " + edge_name(e.u, e.v));
        }
        const double d =
            euclidean(nodes_[iu->second].pos(), nodes_[iv->second].pos());
        if (!(e.length > 0.0)) {
            throw ValidationError("edge " + edge_name(e.u, e.v) +
                                  " has non-positive length");
        }
        if (std::abs(e.length - d) > 1e-9 * std::max(e.length, d)) {
            throw ValidationError("edge " + edge_name(e.u, e.v) +
                                  " length " + std::to_string(e.length) +
                                  " does not match node distance " +
                                  std::to_string(d));
        }
        adjacency_[iu->second].push_back({e.v, e.length, e.cost, e.battery});
        adjacency_[iv->second].push_back({e.u, e.length, e.cost, e.battery});
    }

    // Deterministic neighbor order regardless of input edge order.
    for (auto& nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const Neighbor& a, const Neighbor& b) {
                      return a.node < b.node;
                  });
    }
}

const Node& SkywayNetwork::node(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw Error("unknown node id " + std::to_string(id));
    }
    return nodes_[it->second];
}

std::size_t SkywayNetwork::index_of(int id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw Error("unknown node id " + std::to_string(id));
    }
    return it->second;
}

std::span<const SkywayNetwork::Neighbor> SkywayNetwork::neighbors(
    int id) const {
    return adjacency_[index_of(id)];
}

bool SkywayNetwork::has_edge(int u, int v) const {
    auto it = index_.find(u);
    if (it == index_.end() || !has_node(v)) return false;
    for (const Neighbor& nb : adjacency_[it->second]) {
        if (nb.node == v) return true;
    }
    return false;
}

double SkywayNetwork::edge_length(int u, int v) const {
    for (const Neighbor& nb : neighbors(u)) {
        if (nb.node == v) return nb.length;
    }
    throw Error("unknown edge " + edge_name(u, v));
}

NetworkView::NetworkView(const SkywayNetwork& net, int failed_u, int failed_v)
    : net_(&net), failed_u_(failed_u), failed_v_(failed_v) {
    if (!net.has_edge(failed_u, failed_v)) {
        throw Error("unknown edge " + edge_name(failed_u, failed_v));
    }
}

bool NetworkView::edge_present(int u, int v) const {
    return !masked(u, v) && net_->has_edge(u, v);
}

std::vector<SkywayNetwork::Neighbor> NetworkView::neighbors_of(int id) const {
    std::vector<SkywayNetwork::Neighbor> out;
    for_each_neighbor(id, [&](const SkywayNetwork::Neighbor& nb) {
        out.push_back(nb);
    });
    return out;
}

NetworkView with_failed_edge(const SkywayNetwork& net, int u, int v) {
    return NetworkView(net, u, v);
}

}  // namespace skyway
