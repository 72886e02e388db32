// Shared test fixtures.
#pragma once

#include <cmath>
#include <vector>

#include "skyway/network.hpp"

namespace fixtures {

// Five-node fixture: A(0,0) B(10,0) C(5,4) D(5,-6) E(20,20) with edges
// A-B, A-C, C-B, A-D, D-B, B-E. Ids follow letter order, A = 0.
inline skyway::SkywayNetwork net5() {
    std::vector<skyway::Node> nodes{
        {0, 0.0, 0.0}, {1, 10.0, 0.0}, {2, 5.0, 4.0},
        {3, 5.0, -6.0}, {4, 20.0, 20.0},
    };
    auto edge = [&](int u, int v) {
        const double len = skyway::euclidean(nodes[u].pos(), nodes[v].pos());
        return skyway::Edge{u, v, len, len, len};
    };
    std::vector<skyway::Edge> edges{edge(0, 1), edge(0, 2), edge(2, 1),
                                    edge(0, 3), edge(3, 1), edge(1, 4)};
    return skyway::SkywayNetwork(std::move(nodes), std::move(edges));
}

// Length of the A-C-B detour on net5.
inline double net5_detour_length() { return 2.0 * std::sqrt(41.0); }

// Builds a network from coordinate/edge lists, computing lengths.
inline skyway::SkywayNetwork make_net(
    const std::vector<skyway::Point>& coords,
    const std::vector<std::pair<int, int>>& edge_pairs) {
    std::vector<skyway::Node> nodes;
    nodes.reserve(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        nodes.push_back({static_cast<int>(i), coords[i].x, coords[i].y});
    }
    std::vector<skyway::Edge> edges;
    edges.reserve(edge_pairs.size());
    for (auto [u, v] : edge_pairs) {
        const double len = skyway::euclidean(coords[u], coords[v]);
        edges.push_back({u, v, len, len, len});
    }
    return skyway::SkywayNetwork(std::move(nodes), std::move(edges));
}

}  // namespace fixtures
