#include "skyway/pathfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace skyway {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

struct SearchArrays {
    std::vector<double> dist;
    std::vector<int> prev;        // predecessor node id, -1 at source
    std::vector<char> allowed;    // empty means everything allowed
    std::vector<char> labeled;
};

SearchArrays make_arrays(const SkywayNetwork& net,
                         const std::vector<int>* allowed, int src, int dst,
                         const char* who) {
    if (!net.has_node(src) || !net.has_node(dst)) {
        throw Error(std::string(who) + ": unknown source or destination node");
    }
    SearchArrays a;
    a.dist.assign(net.num_nodes(), kInf);
    a.prev.assign(net.num_nodes(), -1);
    a.labeled.assign(net.num_nodes(), 0);
    if (allowed) {
        a.allowed.assign(net.num_nodes(), 0);
        for (int id : *allowed) {
            if (net.has_node(id)) a.allowed[net.index_of(id)] = 1;
        }
        if (!a.allowed[net.index_of(src)] || !a.allowed[net.index_of(dst)]) {
            throw Error(std::string(who) +
                        ": source or destination excluded by allowed set");
        }
    }
    return a;
}

Path reconstruct(const SkywayNetwork& net, const SearchArrays& a, int src,
                 int dst) {
    Path p;
    p.total_length = a.dist[net.index_of(dst)];
    int cur = dst;
    while (cur != src) {
        p.nodes.push_back(cur);
        cur = a.prev[net.index_of(cur)];
    }
    p.nodes.push_back(src);
    std::reverse(p.nodes.begin(), p.nodes.end());
    return p;
}

// Equal-length alternatives keep the smaller predecessor id; predecessor
// distances are strictly smaller (positive weights), so chains stay
// acyclic.
void tie_update_prev(SearchArrays& a, std::size_t vi, int u) {
    if (a.prev[vi] == -1 || u < a.prev[vi]) a.prev[vi] = u;
}

struct QueueEntry {
    double key;  // distance, or f-value for A*
    double g;    // distance from source
    int id;

    bool operator>(const QueueEntry& o) const {
        if (key != o.key) return key > o.key;
        return id > o.id;
    }
};

using MinQueue =
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

}  // namespace

SearchOutcome dijkstra(const NetworkView& view, int src, int dst,
                       const std::vector<int>* allowed) {
    const SkywayNetwork& net = view.base();
    SearchArrays a = make_arrays(net, allowed, src, dst, "dijkstra");

    const auto start = Clock::now();
    SearchOutcome out;
    const std::size_t si = net.index_of(src);
    a.dist[si] = 0.0;
    a.labeled[si] = 1;
    out.stats.nodes_considered = 1;

    // Settles the whole allowed search space rather than stopping at
    // dst: the global pass considers every network node, which is what
    // the reactive algorithms' pruning is measured against.
    MinQueue pq;
    pq.push({0.0, 0.0, src});
    while (!pq.empty()) {
        const QueueEntry top = pq.top();
        pq.pop();
        const std::size_t ui = net.index_of(top.id);
        if (top.g > a.dist[ui]) continue;  // stale
        ++out.stats.settled;
        view.for_each_neighbor(top.id, [&](const SkywayNetwork::Neighbor& nb) {
            const std::size_t vi = net.index_of(nb.node);
            if (!a.allowed.empty() && !a.allowed[vi]) return;
            ++out.stats.edges_considered;
            const double nd = top.g + nb.length;
            if (nd < a.dist[vi]) {
                a.dist[vi] = nd;
                a.prev[vi] = top.id;
                if (!a.labeled[vi]) {
                    a.labeled[vi] = 1;
                    ++out.stats.nodes_considered;
                }
                pq.push({nd, nd, nb.node});
            } else if (nd == a.dist[vi]) {
                tie_update_prev(a, vi, top.id);
            }
        });
    }

    if (a.dist[net.index_of(dst)] < kInf) {
        out.path = reconstruct(net, a, src, dst);
    }
    out.stats.elapsed = Clock::now() - start;
    return out;
}

SearchOutcome astar(const NetworkView& view, int src, int dst) {
    const SkywayNetwork& net = view.base();
    SearchArrays a = make_arrays(net, nullptr, src, dst, "astar");

    const auto start = Clock::now();
    SearchOutcome out;
    const Point goal = net.node(dst).pos();
    // Shaved slightly below the straight-line distance so rounding can
    // never push the heuristic above an actual remaining path length.
    auto heuristic = [&](int id) {
        return euclidean(net.node(id).pos(), goal) * (1.0 - 1e-9);
    };

    const std::size_t si = net.index_of(src);
    a.dist[si] = 0.0;
    a.labeled[si] = 1;
    out.stats.nodes_considered = 1;

    MinQueue pq;
    pq.push({heuristic(src), 0.0, src});
    while (!pq.empty()) {
        const QueueEntry top = pq.top();
        pq.pop();
        const std::size_t ui = net.index_of(top.id);
        if (top.g > a.dist[ui]) continue;
        ++out.stats.settled;
        if (top.id == dst) break;
        view.for_each_neighbor(top.id, [&](const SkywayNetwork::Neighbor& nb) {
            const std::size_t vi = net.index_of(nb.node);
            ++out.stats.edges_considered;
            const double nd = top.g + nb.length;
            if (nd < a.dist[vi]) {
                a.dist[vi] = nd;
                a.prev[vi] = top.id;
                if (!a.labeled[vi]) {
                    a.labeled[vi] = 1;
                    ++out.stats.nodes_considered;
                }
                pq.push({nd + heuristic(nb.node), nd, nb.node});
            } else if (nd == a.dist[vi]) {
                tie_update_prev(a, vi, top.id);
            }
        });
    }

    if (a.dist[net.index_of(dst)] < kInf) {
        out.path = reconstruct(net, a, src, dst);
    }
    out.stats.elapsed = Clock::now() - start;
    return out;
}

SearchOutcome bellman_ford(const NetworkView& view, int src, int dst) {
    const SkywayNetwork& net = view.base();
    SearchArrays a = make_arrays(net, nullptr, src, dst, "bellman_ford");

    const auto start = Clock::now();
    SearchOutcome out;
    a.dist[net.index_of(src)] = 0.0;

    // Fixed id order keeps relaxation deterministic.
    std::vector<int> order;
    order.reserve(net.num_nodes());
    for (const Node& n : net.nodes()) order.push_back(n.id);
    std::sort(order.begin(), order.end());

    const std::size_t rounds = net.num_nodes() > 0 ? net.num_nodes() - 1 : 0;
    for (std::size_t round = 0; round < rounds; ++round) {
        bool changed = false;
        for (int u : order) {
            const std::size_t ui = net.index_of(u);
            const double du = a.dist[ui];
            if (du == kInf) continue;
            view.for_each_neighbor(u, [&](const SkywayNetwork::Neighbor& nb) {
                const std::size_t vi = net.index_of(nb.node);
                ++out.stats.edges_considered;
                const double nd = du + nb.length;
                if (nd < a.dist[vi]) {
                    a.dist[vi] = nd;
                    a.prev[vi] = u;
                    changed = true;
                } else if (nd == a.dist[vi]) {
                    tie_update_prev(a, vi, u);
                }
            });
        }
        if (!changed) break;
    }

    for (double d : a.dist) {
        if (d < kInf) ++out.stats.nodes_considered;
    }
    out.stats.settled = out.stats.nodes_considered;

    if (a.dist[net.index_of(dst)] < kInf) {
        out.path = reconstruct(net, a, src, dst);
    }
    out.stats.elapsed = Clock::now() - start;
    return out;
}

namespace {

struct BruteState {
    const NetworkView& view;
    const std::vector<char>& allowed;  // by dense index
    int dst;
    std::vector<char> visited;
    std::vector<int> current;
    double current_length = 0.0;
    std::optional<Path> best;

    void visit(int u) {
        if (u == dst) {
            const bool better =
                !best || current_length < best->total_length ||
                (current_length == best->total_length &&
                 current < best->nodes);
            if (better) best = Path{current, current_length};
            return;
        }
        view.for_each_neighbor(u, [&](const SkywayNetwork::Neighbor& nb) {
            const std::size_t vi = view.base().index_of(nb.node);
            if (visited[vi] || !allowed[vi]) return;
            visited[vi] = 1;
            current.push_back(nb.node);
            current_length += nb.length;
            visit(nb.node);
            current_length -= nb.length;
            current.pop_back();
            visited[vi] = 0;
        });
    }
};

}  // namespace

std::optional<Path> brute_force_shortest(const NetworkView& view, int src,
                                         int dst,
                                         const std::vector<int>* allowed) {
    const SkywayNetwork& net = view.base();
    SearchArrays a = make_arrays(net, allowed, src, dst, "brute_force_shortest");
    if (a.allowed.empty()) a.allowed.assign(net.num_nodes(), 1);

    const std::size_t universe = static_cast<std::size_t>(
        std::count(a.allowed.begin(), a.allowed.end(), 1));
    if (universe > 12) {
        throw Error("brute_force_shortest: more than 12 candidate nodes");
    }

    if (src == dst) {
        return Path{{src}, 0.0};
    }
    BruteState state{view, a.allowed, dst, std::vector<char>(net.num_nodes(), 0),
                     {src}, 0.0, std::nullopt};
    state.visited[net.index_of(src)] = 1;
    state.visit(src);
    return state.best;
}

}  // namespace skyway
