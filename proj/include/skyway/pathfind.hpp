#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "skyway/network.hpp"

namespace skyway {

struct Path {
    std::vector<int> nodes;
    double total_length = 0.0;
};

struct SearchStats {
    std::size_t nodes_considered = 0;  // nodes that ever received a label
    std::size_t edges_considered = 0;  // relaxation attempts
    std::size_t settled = 0;           // nodes finalized
    std::chrono::nanoseconds elapsed{0};
};

/// Search outcome; stats are populated even when no path exists so that
/// failed iterations still contribute to measured search time.
struct SearchOutcome {
    std::optional<Path> path;
    SearchStats stats;
};

/// Minimum-length path from src to dst using only nodes in `allowed`
/// (all nodes when null). An edge is traversable only when both of its
/// endpoints are allowed. Equal-length ties resolve toward smaller node
/// ids. Throws Error when src/dst are missing or excluded.
SearchOutcome dijkstra(const NetworkView& view, int src, int dst,
                       const std::vector<int>* allowed = nullptr);

/// A* with the Euclidean distance to dst as heuristic; admissible since
/// edge lengths are Euclidean, so path lengths match dijkstra.
SearchOutcome astar(const NetworkView& view, int src, int dst);

/// |V|-1 relaxation rounds with early exit.
SearchOutcome bellman_ford(const NetworkView& view, int src, int dst);

/// Exhaustive simple-path enumeration, the test oracle. Refuses more
/// than 12 candidate nodes.
std::optional<Path> brute_force_shortest(const NetworkView& view, int src,
                                         int dst,
                                         const std::vector<int>* allowed = nullptr);

}  // namespace skyway
