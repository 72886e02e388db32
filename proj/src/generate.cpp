#include "skyway/generate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace skyway {

namespace {

// Uniform double in [0, 1) from the top 53 bits; avoids the
// implementation-defined behavior of std::uniform_real_distribution.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Candidate {
    double dist2;
    int id;
};

}  // namespace

SkywayNetwork generate_network(const GenParams& params) {
    if (params.num_nodes < 2) {
        throw Error("generate_network: num_nodes must be at least 2");
    }
    if (params.max_connectivity < 1) {
        throw Error("generate_network: max_connectivity must be at least 1");
    }
    if (!(params.neighbor_radius_frac > 0.0) ||
        params.neighbor_radius_frac > 1.0) {
        throw Error("generate_network: neighbor_radius_frac must be in (0, 1]");
    }
    if (!(params.network_size > 0.0)) {
        throw Error("generate_network: network_size must be positive");
    }

    const int n = static_cast<int>(params.num_nodes);
    const double size = params.network_size;
    const double radius = params.neighbor_radius_frac * size;
    const double radius2 = radius * radius;

    std::mt19937_64 rng(params.seed);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = unit_double(rng) * size;
        ys[i] = unit_double(rng) * size;
    }

    // Bucket grid with cell width >= radius, so neighbor candidates of a
    // node lie in its 3x3 cell block. Capped near sqrt(n) cells per axis
    // so tiny radii cannot blow up the grid.
    const int grid_cap = std::max(
        1, static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(n)))));
    const int grid = std::clamp(
        static_cast<int>(std::floor(size / radius)), 1, grid_cap);
    const double inv_cell = static_cast<double>(grid) / size;
    auto cell_of = [&](double c) {
        int k = static_cast<int>(c * inv_cell);
        return std::clamp(k, 0, grid - 1);
    };
    std::vector<std::vector<int>> buckets(
        static_cast<std::size_t>(grid) * grid);
    for (int i = 0; i < n; ++i) {
        buckets[static_cast<std::size_t>(cell_of(ys[i])) * grid +
                cell_of(xs[i])]
            .push_back(i);
    }

    std::vector<std::pair<int, int>> pairs;
    std::vector<Candidate> cands;
    for (int i = 0; i < n; ++i) {
        cands.clear();
        const int cx = cell_of(xs[i]);
        const int cy = cell_of(ys[i]);
        for (int by = std::max(0, cy - 1); by <= std::min(grid - 1, cy + 1);
             ++by) {
            for (int bx = std::max(0, cx - 1);
                 bx <= std::min(grid - 1, cx + 1); ++bx) {
                for (int j : buckets[static_cast<std::size_t>(by) * grid + bx]) {
                    if (j == i) continue;
                    const double dx = xs[i] - xs[j];
                    const double dy = ys[i] - ys[j];
                    const double d2 = dx * dx + dy * dy;
                    if (d2 <= radius2 && d2 > 0.0) {
                        cands.push_back({d2, j});
                    }
                }
            }
        }
        const std::size_t k =
            std::min<std::size_t>(params.max_connectivity, cands.size());
        auto closer = [](const Candidate& a, const Candidate& b) {
            return a.dist2 != b.dist2 ? a.dist2 < b.dist2 : a.id < b.id;
        };
        if (k < cands.size()) {
            std::nth_element(cands.begin(), cands.begin() + k, cands.end(),
                             closer);
            cands.resize(k);
        }
        for (const Candidate& c : cands) {
            pairs.emplace_back(std::min(i, c.id), std::max(i, c.id));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    if (pairs.empty()) {
        throw Error("generate_network: no edges can be formed "
                    "(neighbor radius too small)");
    }

    // Largest connected component; ties go to the component holding the
    // smallest node id.
    std::vector<std::vector<int>> adj(n);
    for (auto [u, v] : pairs) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    std::vector<int> component(n, -1);
    std::vector<int> comp_size;
    std::vector<int> stack;
    for (int i = 0; i < n; ++i) {
        if (component[i] >= 0) continue;
        const int c = static_cast<int>(comp_size.size());
        int count = 0;
        stack.push_back(i);
        component[i] = c;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            ++count;
            for (int v : adj[u]) {
                if (component[v] < 0) {
                    component[v] = c;
                    stack.push_back(v);
                }
            }
        }
        comp_size.push_back(count);
    }
    int best = 0;
    for (int c = 1; c < static_cast<int>(comp_size.size()); ++c) {
        if (comp_size[c] > comp_size[best]) best = c;
    }

    // Re-index kept nodes densely by ascending original id.
    std::vector<int> new_id(n, -1);
    std::vector<Node> nodes;
    nodes.reserve(comp_size[best]);
    for (int i = 0; i < n; ++i) {
        if (component[i] == best) {
            new_id[i] = static_cast<int>(nodes.size());
            nodes.push_back({new_id[i], xs[i], ys[i]});
        }
    }
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [u, v] : pairs) {
        if (component[u] != best) continue;
        const double len = std::hypot(xs[u] - xs[v], ys[u] - ys[v]);
        edges.push_back({new_id[u], new_id[v], len, len, len});
    }

    return SkywayNetwork(std::move(nodes), std::move(edges), params.seed);
}

}  // namespace skyway
