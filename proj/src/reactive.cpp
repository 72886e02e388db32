#include "skyway/reactive.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "skyway/generate.hpp"

namespace skyway {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<int> with_endpoints(std::vector<int> ids, int a, int b) {
    ids.push_back(a);
    ids.push_back(b);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

// Edges of the base network with both endpoints allowed; the denominator
// of the edge compression rate uses base edges as well, so a whole-network
// region reports exactly |E|.
std::size_t induced_edge_count(const SkywayNetwork& net,
                               const std::vector<int>& allowed) {
    std::vector<char> mask(net.num_nodes(), 0);
    for (int id : allowed) {
        if (net.has_node(id)) mask[net.index_of(id)] = 1;
    }
    std::size_t twice = 0;
    for (int id : allowed) {
        if (!net.has_node(id)) continue;
        for (const auto& nb : net.neighbors(id)) {
            if (mask[net.index_of(nb.node)]) ++twice;
        }
    }
    return twice / 2;
}

void record_iteration(RecompositionResult& r, Region region,
                      const std::vector<int>& allowed,
                      const SkywayNetwork& net) {
    r.allowed_node_counts.push_back(allowed.size());
    r.allowed_edge_counts.push_back(induced_edge_count(net, allowed));
    r.regions.push_back(std::move(region));
    ++r.iterations;
}

void record_global_iteration(RecompositionResult& r, const SkywayNetwork& net) {
    r.allowed_node_counts.push_back(net.num_nodes());
    r.allowed_edge_counts.push_back(net.num_edges());
    r.regions.emplace_back(WholeNetwork{});
    ++r.iterations;
}

void require_endpoints(const NetworkView& view, int a, int b,
                       const char* who) {
    if (!view.base().has_node(a) || !view.base().has_node(b)) {
        throw Error(std::string(who) + ": unknown node");
    }
    if (a == b) {
        throw Error(std::string(who) + ": endpoints must differ");
    }
}

}  // namespace

std::string failure_type_name(FailureType t) {
    switch (t) {
        case FailureType::kEnvironmental:  return "environmental";
        case FailureType::kOperational:    return "operational";
        case FailureType::kNavigational:   return "navigational";
        case FailureType::kRegulatory:     return "regulatory";
        case FailureType::kInfrastructure: return "infrastructure";
        case FailureType::kServiceLevel:   return "service-level";
    }
    return "unknown";
}

std::string stage_name(Phase1Stage s) {
    switch (s) {
        case Phase1Stage::kTriangle:        return "triangle";
        case Phase1Stage::kMidpointRhombus: return "midpoint-rhombus";
        case Phase1Stage::kRectangle:       return "rectangle";
    }
    return "unknown";
}

RecompositionResult radius_recompose(const NetworkView& view, int a, int b) {
    require_endpoints(view, a, b, "radius_recompose");
    const SkywayNetwork& net = view.base();
    const Point pa = net.node(a).pos();
    const Point pb = net.node(b).pos();
    const double network_size = net.network_size();

    RecompositionResult result;
    double radius = euclidean(pa, pb);
    if (!(radius > 0.0)) {
        radius = std::max(1e-12, 0.2 * network_size);
    }

    while (true) {
        const auto t0 = Clock::now();
        const Circle circle = build_circle(pa, pb, radius);
        std::vector<int> allowed =
            with_endpoints(nodes_in_region(net, Region{circle}), a, b);
        result.region_build_elapsed += Clock::now() - t0;

        record_iteration(result, Region{circle}, allowed, net);
        SearchOutcome out = dijkstra(view, a, b, &allowed);
        result.search_elapsed += out.stats.elapsed;
        if (out.path) {
            result.path = std::move(out.path);
            return result;
        }

        radius += 0.2 * network_size;
        if (radius > 0.5 * network_size) {
            record_global_iteration(result, net);
            SearchOutcome global = dijkstra(view, a, b);
            result.search_elapsed += global.stats.elapsed;
            result.fell_back_to_global = true;
            result.path = std::move(global.path);
            return result;
        }
    }
}

RecompositionResult cell_density_recompose(const NetworkView& view, int a,
                                           int b, double cell_size) {
    require_endpoints(view, a, b, "cell_density_recompose");
    if (!(cell_size > 0.0)) {
        throw Error("cell_density_recompose: cell_size must be positive");
    }
    const SkywayNetwork& net = view.base();

    RecompositionResult result;
    auto t0 = Clock::now();
    const CellGrid grid = build_cell_grid(net, cell_size);
    std::vector<int> nn{a, b};
    view.for_each_neighbor(a, [&](const SkywayNetwork::Neighbor& x) {
        nn.push_back(x.node);
    });
    view.for_each_neighbor(b, [&](const SkywayNetwork::Neighbor& x) {
        nn.push_back(x.node);
    });
    std::sort(nn.begin(), nn.end());
    nn.erase(std::unique(nn.begin(), nn.end()), nn.end());
    result.region_build_elapsed += Clock::now() - t0;

    double grow = cell_size;
    while (true) {
        t0 = Clock::now();
        SquareUnion area = build_partial_areas(net, nn, grid, grow);
        std::vector<int> allowed =
            with_endpoints(nodes_in_region(net, Region{area}), a, b);
        result.region_build_elapsed += Clock::now() - t0;

        if (allowed.size() == net.num_nodes()) {
            // The union covers every node, so the restricted search would
            // be the global one.
            record_global_iteration(result, net);
            SearchOutcome global = dijkstra(view, a, b);
            result.search_elapsed += global.stats.elapsed;
            result.fell_back_to_global = true;
            result.path = std::move(global.path);
            return result;
        }

        record_iteration(result, Region{std::move(area)}, allowed, net);
        SearchOutcome out = dijkstra(view, a, b, &allowed);
        result.search_elapsed += out.stats.elapsed;
        if (out.path) {
            result.path = std::move(out.path);
            return result;
        }
        grow += cell_size;
    }
}

RecompositionResult two_phased_recompose(const NetworkView& view, int a,
                                         int b, const TwoPhasedOptions& opts) {
    require_endpoints(view, a, b, "two_phased_recompose");
    if (!(opts.val_frac > 0.0)) {
        throw Error("two_phased_recompose: val_frac must be positive");
    }
    const SkywayNetwork& net = view.base();
    const Point pa = net.node(a).pos();
    const Point pb = net.node(b).pos();
    const double seg = euclidean(pa, pb);
    if (!(seg > 0.0)) {
        throw Error("two_phased_recompose: degenerate segment (a equals b)");
    }

    RecompositionResult result;
    auto t0 = Clock::now();
    const RhombusRegions rr =
        build_rhombus_regions(net, pa, pb, opts.val_frac * seg);
    const std::vector<int> rect_nodes =
        with_endpoints(nodes_in_region(net, Region{rr.full}), a, b);
    result.region_build_elapsed += Clock::now() - t0;

    struct Stage {
        Phase1Stage which;
        const ConvexPolygonRegion* region;
        double fraction;
    };
    const Stage stages[] = {
        {Phase1Stage::kTriangle, &rr.triangle, 0.25},
        {Phase1Stage::kMidpointRhombus, &rr.midpoint, 0.5},
        {Phase1Stage::kRectangle, &rr.full, 1.0},
    };

    for (const Stage& stage : stages) {
        t0 = Clock::now();
        std::vector<int> allowed =
            stage.which == Phase1Stage::kRectangle
                ? rect_nodes
                : with_endpoints(nodes_in_region(net, Region{*stage.region}),
                                 a, b);
        result.region_build_elapsed += Clock::now() - t0;

        const bool skip =
            opts.stage_skipping &&
            static_cast<double>(allowed.size()) <
                stage.fraction * static_cast<double>(rect_nodes.size());
        result.stage_skips.push_back({stage.which, skip});
        if (skip) continue;

        record_iteration(result, Region{*stage.region}, allowed, net);
        SearchOutcome out = dijkstra(view, a, b, &allowed);
        result.search_elapsed += out.stats.elapsed;
        if (out.path) {
            result.path = std::move(out.path);
            result.found_stage = static_cast<int>(stage.which);
            return result;
        }
    }

    // Phase 2: grow the rectangle's node set by each member's shortest
    // incident edge until a path appears or half the network is reached.
    std::vector<int> grown = rect_nodes;
    std::vector<char> in_set(net.num_nodes(), 0);
    for (int id : grown) in_set[net.index_of(id)] = 1;

    while (true) {
        t0 = Clock::now();
        std::vector<int> additions;
        for (int id : grown) {
            int best = -1;
            double best_len = 0.0;
            view.for_each_neighbor(id, [&](const SkywayNetwork::Neighbor& nb) {
                if (in_set[net.index_of(nb.node)]) return;
                if (best < 0 || nb.length < best_len ||
                    (nb.length == best_len && nb.node < best)) {
                    best = nb.node;
                    best_len = nb.length;
                }
            });
            if (best >= 0) additions.push_back(best);
        }
        std::sort(additions.begin(), additions.end());
        additions.erase(std::unique(additions.begin(), additions.end()),
                        additions.end());
        bool grew = false;
        for (int id : additions) {
            if (!in_set[net.index_of(id)]) {
                in_set[net.index_of(id)] = 1;
                grown.push_back(id);
                grew = true;
            }
        }
        std::sort(grown.begin(), grown.end());
        result.region_build_elapsed += Clock::now() - t0;

        const bool half_reached =
            static_cast<double>(grown.size()) >=
            0.5 * static_cast<double>(net.num_nodes());
        if (half_reached || !grew) {
            record_global_iteration(result, net);
            SearchOutcome global = dijkstra(view, a, b);
            result.search_elapsed += global.stats.elapsed;
            result.fell_back_to_global = true;
            result.path = std::move(global.path);
            return result;
        }

        record_iteration(result, Region{NodeSetRegion{grown}}, grown, net);
        SearchOutcome out = dijkstra(view, a, b, &grown);
        result.search_elapsed += out.stats.elapsed;
        if (out.path) {
            result.path = std::move(out.path);
            return result;
        }
    }
}

std::string recomposition_to_json(const RecompositionResult& r,
                                  bool zero_timing) {
    using nlohmann::json;
    json j;
    if (r.path) {
        j["path"] = {{"nodes", r.path->nodes},
                     {"total_length", r.path->total_length}};
    } else {
        j["path"] = nullptr;
    }
    j["iterations"] = r.iterations;
    j["fell_back_to_global"] = r.fell_back_to_global;
    j["region_build_ns"] = zero_timing ? 0 : r.region_build_elapsed.count();
    j["search_ns"] = zero_timing ? 0 : r.search_elapsed.count();
    j["allowed_node_counts"] = r.allowed_node_counts;
    j["allowed_edge_counts"] = r.allowed_edge_counts;
    json regions = json::array();
    for (const Region& region : r.regions) {
        regions.push_back(json::parse(region_to_json(region)));
    }
    j["regions"] = std::move(regions);
    json skips = json::array();
    for (const StageSkip& s : r.stage_skips) {
        skips.push_back({{"stage", stage_name(s.stage)}, {"skipped", s.skipped}});
    }
    j["stage_skips"] = std::move(skips);
    if (r.found_stage >= 0) {
        j["found_stage"] = stage_name(static_cast<Phase1Stage>(r.found_stage));
    } else {
        j["found_stage"] = nullptr;
    }
    return j.dump(2);
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sample_range(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

std::uint32_t sample_range(std::mt19937_64& rng, std::uint32_t lo,
                           std::uint32_t hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<std::uint32_t>(rng() % (hi - lo + 1));
}

}  // namespace

SkipReport analyze_stage_skipping(const SkipAnalysisParams& params,
                                  std::size_t scenarios, std::uint64_t seed) {
    if (scenarios < 1) {
        throw Error("analyze_stage_skipping: scenarios must be >= 1");
    }
    SkipReport report;
    report.scenarios = scenarios;

    double sum_eff = 0.0, sum_ineff = 0.0;
    for (std::size_t s = 0; s < scenarios; ++s) {
        std::mt19937_64 rng(mix_seed(seed, s));
        GenParams gp;
        gp.num_nodes = sample_range(rng, params.min_nodes, params.max_nodes);
        gp.max_connectivity =
            sample_range(rng, params.min_connectivity, params.max_connectivity);
        gp.network_size = sample_range(rng, params.min_size, params.max_size);
        gp.neighbor_radius_frac =
            sample_range(rng, params.min_frac, params.max_frac);
        gp.seed = rng();

        SkywayNetwork net = [&]() -> SkywayNetwork {
            for (int attempt = 0;; ++attempt) {
                try {
                    return generate_network(gp);
                } catch (const Error&) {
                    if (attempt >= 64) throw;
                    gp.seed = mix_seed(gp.seed, 17);
                }
            }
        }();
        if (net.num_nodes() < 2) continue;

        const int src = static_cast<int>(rng() % net.num_nodes());
        int dst = static_cast<int>(rng() % net.num_nodes());
        if (dst == src) dst = (dst + 1) % static_cast<int>(net.num_nodes());
        SearchOutcome route = dijkstra(NetworkView(net), src, dst);
        if (!route.path || route.path->nodes.size() < 2) continue;
        const std::size_t pick = rng() % (route.path->nodes.size() - 1);
        const int ea = route.path->nodes[pick];
        const int eb = route.path->nodes[pick + 1];

        const NetworkView failed = with_failed_edge(net, ea, eb);
        TwoPhasedOptions with_skip{params.val_frac, true};
        TwoPhasedOptions no_skip{params.val_frac, false};
        const RecompositionResult skipping =
            two_phased_recompose(failed, ea, eb, with_skip);

        bool any_skip = false;
        for (const StageSkip& sk : skipping.stage_skips) {
            any_skip = any_skip || sk.skipped;
        }
        if (!any_skip) continue;

        const RecompositionResult plain =
            two_phased_recompose(failed, ea, eb, no_skip);
        for (const StageSkip& sk : skipping.stage_skips) {
            if (!sk.skipped) continue;
            const bool path_in_stage =
                plain.found_stage >= 0 &&
                plain.found_stage <= static_cast<int>(sk.stage);
            SkipEvent ev;
            ev.scenario = s;
            ev.gen = gp;
            ev.failed_edge = {ea, eb};
            ev.stage = sk.stage;
            ev.effective = !path_in_stage;
            ev.with_skip_final_nodes = skipping.allowed_node_counts.empty()
                                           ? 0
                                           : skipping.allowed_node_counts.back();
            ev.without_skip_final_nodes = plain.allowed_node_counts.empty()
                                              ? 0
                                              : plain.allowed_node_counts.back();
            if (ev.effective) {
                ++report.effective_count;
                sum_eff += static_cast<double>(ev.with_skip_final_nodes);
            } else {
                ++report.ineffective_count;
                sum_ineff += static_cast<double>(ev.with_skip_final_nodes);
            }
            report.events.push_back(std::move(ev));
        }
    }

    if (report.effective_count > 0) {
        report.mean_nodes_effective =
            sum_eff / static_cast<double>(report.effective_count);
    }
    if (report.ineffective_count > 0) {
        report.mean_nodes_ineffective =
            sum_ineff / static_cast<double>(report.ineffective_count);
    }
    if (report.effective_count > 0 && report.ineffective_count > 0) {
        report.effective_to_ineffective_ratio =
            report.mean_nodes_effective / report.mean_nodes_ineffective;
    }
    return report;
}

std::string skip_report_to_json(const SkipReport& report) {
    using nlohmann::json;
    json j;
    j["scenarios"] = report.scenarios;
    j["effective_count"] = report.effective_count;
    j["ineffective_count"] = report.ineffective_count;
    j["mean_nodes_effective"] = report.mean_nodes_effective;
    j["mean_nodes_ineffective"] = report.mean_nodes_ineffective;
    j["effective_to_ineffective_ratio"] = report.effective_to_ineffective_ratio;
    json events = json::array();
    for (const SkipEvent& ev : report.events) {
        events.push_back({
            {"scenario", ev.scenario},
            {"gen",
             {{"num_nodes", ev.gen.num_nodes},
              {"max_connectivity", ev.gen.max_connectivity},
              {"network_size", ev.gen.network_size},
              {"neighbor_radius_frac", ev.gen.neighbor_radius_frac},
              {"seed", ev.gen.seed}}},
            {"failed_edge", {ev.failed_edge.first, ev.failed_edge.second}},
            {"stage", stage_name(ev.stage)},
            {"effective", ev.effective},
            {"with_skip_final_nodes", ev.with_skip_final_nodes},
            {"without_skip_final_nodes", ev.without_skip_final_nodes},
        });
    }
    j["events"] = std::move(events);
    return j.dump(2);
}

}  // namespace skyway
