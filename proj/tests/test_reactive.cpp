#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "skyway/generate.hpp"
#include "skyway/reactive.hpp"

using namespace skyway;

namespace {

const double kDetour = fixtures::net5_detour_length();

bool path_uses_edge(const Path& path, int u, int v) {
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
        const int a = path.nodes[i];
        const int b = path.nodes[i + 1];
        if ((a == u && b == v) || (a == v && b == u)) return true;
    }
    return false;
}

bool counts_non_decreasing(const std::vector<std::size_t>& counts) {
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] < counts[i - 1]) return false;
    }
    return true;
}

// Two nodes joined directly and through a distant detour pair; failing
// the direct edge forces the search far outside every early circle.
SkywayNetwork far_detour_net() {
    return fixtures::make_net({{0, 0}, {2, 0}, {0, 100}, {2, 100}},
                              {{0, 1}, {0, 2}, {2, 3}, {3, 1}});
}

}  // namespace

TEST_CASE("radius recomposition solves the fixture in one iteration") {
    const SkywayNetwork net = fixtures::net5();
    const NetworkView view = with_failed_edge(net, 0, 1);
    const RecompositionResult r = radius_recompose(view, 0, 1);

    REQUIRE(r.path.has_value());
    CHECK(r.path->nodes == std::vector<int>{0, 2, 1});
    CHECK(r.path->total_length == doctest::Approx(kDetour).epsilon(1e-9));
    CHECK_FALSE(r.fell_back_to_global);
    CHECK(r.iterations == 1);
    REQUIRE(r.allowed_node_counts.size() == 1);
    CHECK(r.allowed_node_counts[0] == 4);  // A, B, C, D inside the circle
    REQUIRE(r.regions.size() == 1);
    const auto* circle = std::get_if<Circle>(&r.regions[0]);
    REQUIRE(circle != nullptr);
    CHECK(circle->radius == doctest::Approx(10.0));
    CHECK(circle->center.x == doctest::Approx(5.0));
}

TEST_CASE("radius recomposition falls back past the growth cap") {
    const SkywayNetwork net = far_detour_net();
    const NetworkView view = with_failed_edge(net, 0, 1);
    const RecompositionResult r = radius_recompose(view, 0, 1);

    REQUIRE(r.path.has_value());
    CHECK(r.fell_back_to_global);
    CHECK(r.path->nodes == std::vector<int>{0, 2, 3, 1});
    CHECK(r.path->total_length == doctest::Approx(202.0));
    // radii 2, 22, 42 then the global pass
    CHECK(r.iterations == 4);
    CHECK(counts_non_decreasing(r.allowed_node_counts));
    CHECK(std::holds_alternative<WholeNetwork>(r.regions.back()));
}

TEST_CASE("radius recomposition reports unreachable pairs") {
    const SkywayNetwork net = fixtures::make_net(
        {{0, 0}, {1, 0}, {50, 50}, {51, 50}}, {{0, 1}, {2, 3}});
    const NetworkView view = with_failed_edge(net, 0, 1);
    const RecompositionResult r = radius_recompose(view, 0, 1);
    CHECK_FALSE(r.path.has_value());
    CHECK(r.fell_back_to_global);

    CHECK_THROWS_AS(radius_recompose(view, 0, 99), Error);
    CHECK_THROWS_AS(radius_recompose(view, 0, 0), Error);
}

TEST_CASE("cell density covers the fixture and goes global") {
    const SkywayNetwork net = fixtures::net5();
    const NetworkView view = with_failed_edge(net, 0, 1);
    const RecompositionResult r = cell_density_recompose(view, 0, 1, 10.0);

    // neighbor squares swallow all five nodes, so the first pass is the
    // global search already
    REQUIRE(r.path.has_value());
    CHECK(r.path->nodes == std::vector<int>{0, 2, 1});
    CHECK(r.path->total_length == doctest::Approx(kDetour).epsilon(1e-9));
    CHECK(r.fell_back_to_global);
    CHECK(r.iterations == 1);
    CHECK(std::holds_alternative<WholeNetwork>(r.regions[0]));
    CHECK(r.allowed_node_counts[0] == net.num_nodes());
}

TEST_CASE("cell density stays local when squares miss far nodes") {
    // E hangs off C far away, so it is not a neighbor of the endpoints
    const SkywayNetwork net = fixtures::make_net(
        {{0, 0}, {10, 0}, {5, 4}, {5, -6}, {300, 300}},
        {{0, 1}, {0, 2}, {2, 1}, {0, 3}, {3, 1}, {2, 4}});
    const NetworkView view = with_failed_edge(net, 0, 1);
    const RecompositionResult r = cell_density_recompose(view, 0, 1, 10.0);

    REQUIRE(r.path.has_value());
    CHECK(r.path->nodes == std::vector<int>{0, 2, 1});
    CHECK_FALSE(r.fell_back_to_global);
    CHECK(r.iterations == 1);
    const auto* squares = std::get_if<SquareUnion>(&r.regions[0]);
    REQUIRE(squares != nullptr);
    CHECK(squares->squares.size() == 4);  // NN = {A, B, C, D}
    CHECK(r.allowed_node_counts[0] == 4);
}

TEST_CASE("cell density fallback equals the plain global search") {
    const SkywayNetwork net = far_detour_net();
    const NetworkView view = with_failed_edge(net, 0, 1);
    const RecompositionResult r = cell_density_recompose(view, 0, 1, 10.0);
    const SearchOutcome global = dijkstra(view, 0, 1);

    REQUIRE(r.path.has_value());
    REQUIRE(global.path.has_value());
    CHECK(r.fell_back_to_global);
    CHECK(r.path->total_length ==
          doctest::Approx(global.path->total_length).epsilon(1e-12));

    CHECK_THROWS_AS(cell_density_recompose(view, 0, 1, 0.0), Error);
}

TEST_CASE("two-phased finds the fixture detour in the triangle stage") {
    const SkywayNetwork net = fixtures::net5();
    const NetworkView view = with_failed_edge(net, 0, 1);
    const RecompositionResult r = two_phased_recompose(view, 0, 1);

    REQUIRE(r.path.has_value());
    CHECK(r.path->nodes == std::vector<int>{0, 2, 1});
    CHECK(r.path->total_length == doctest::Approx(kDetour).epsilon(1e-9));
    CHECK_FALSE(r.fell_back_to_global);
    CHECK(r.found_stage == 0);
    CHECK(r.iterations == 1);
    REQUIRE(r.stage_skips.size() == 1);
    CHECK(r.stage_skips[0].stage == Phase1Stage::kTriangle);
    CHECK_FALSE(r.stage_skips[0].skipped);
    // rectangle [0,10]x[-5,5] holds A, B, C; D sits below it
    CHECK(r.allowed_node_counts[0] == 3);
}

TEST_CASE("sparse stages are skipped and recorded") {
    // corners of the rectangle hold nodes outside the midpoint rhombus,
    // so the first two stages fall under their count thresholds
    std::vector<Point> coords{
        {0, 0},      {10, 0},                  // failed edge endpoints
        {0.6, 4.5},  {9.4, 4.5},  {0.6, -4.5}, {9.4, -4.5},
        {1.2, 4.5},  {8.8, 4.5},  {1.2, -4.5}, {8.8, -4.5},
    };
    std::vector<std::pair<int, int>> edges{
        {0, 1}, {0, 2}, {2, 6}, {6, 7}, {7, 3}, {3, 1}};
    const SkywayNetwork net = fixtures::make_net(coords, edges);
    const NetworkView view = with_failed_edge(net, 0, 1);

    const RecompositionResult r = two_phased_recompose(view, 0, 1);
    REQUIRE(r.stage_skips.size() == 3);
    CHECK(r.stage_skips[0].stage == Phase1Stage::kTriangle);
    CHECK(r.stage_skips[0].skipped);  // 2 nodes < 0.25 * 10
    CHECK(r.stage_skips[1].stage == Phase1Stage::kMidpointRhombus);
    CHECK(r.stage_skips[1].skipped);  // 2 nodes < 0.5 * 10
    CHECK_FALSE(r.stage_skips[2].skipped);
    CHECK(r.found_stage == static_cast<int>(Phase1Stage::kRectangle));
    CHECK(r.iterations == 1);
    REQUIRE(r.path.has_value());
    CHECK(r.path->nodes == std::vector<int>{0, 2, 6, 7, 3, 1});

    // without skipping, the sparse stages are searched and fail
    const RecompositionResult plain =
        two_phased_recompose(view, 0, 1, {0.5, false});
    CHECK(plain.iterations == 3);
    for (const StageSkip& s : plain.stage_skips) CHECK_FALSE(s.skipped);
    CHECK(plain.found_stage == static_cast<int>(Phase1Stage::kRectangle));
    CHECK(plain.path->total_length ==
          doctest::Approx(r.path->total_length).epsilon(1e-12));
}

TEST_CASE("phase two grows by nearest neighbors before going global") {
    // detour node c sits far above the corridor; six padding nodes keep
    // the half-network threshold out of reach for the first growth step
    std::vector<Point> coords{{0, 0}, {10, 0}, {5, 30}};
    for (int i = 0; i < 6; ++i) {
        coords.push_back({100.0 + i, 100.0});
    }
    std::vector<std::pair<int, int>> edges{{0, 1}, {0, 2}, {2, 1}};
    for (int i = 3; i < 8; ++i) edges.push_back({i, i + 1});
    const SkywayNetwork net = fixtures::make_net(coords, edges);
    const NetworkView view = with_failed_edge(net, 0, 1);

    const RecompositionResult r = two_phased_recompose(view, 0, 1);
    REQUIRE(r.path.has_value());
    CHECK(r.path->nodes == std::vector<int>{0, 2, 1});
    CHECK(r.path->total_length ==
          doctest::Approx(2.0 * std::sqrt(25.0 + 900.0)).epsilon(1e-9));
    CHECK_FALSE(r.fell_back_to_global);
    CHECK(r.found_stage == -1);
    CHECK(r.iterations == 4);  // three corridor stages plus one growth step
    CHECK(counts_non_decreasing(r.allowed_node_counts));
    CHECK(std::holds_alternative<NodeSetRegion>(r.regions.back()));
    CHECK(r.allowed_node_counts.back() == 3);
}

TEST_CASE("phase two reaching half the network goes global") {
    const SkywayNetwork net = fixtures::make_net(
        {{0, 0}, {10, 0}, {5, 30}}, {{0, 1}, {0, 2}, {2, 1}});
    const NetworkView view = with_failed_edge(net, 0, 1);
    const RecompositionResult r = two_phased_recompose(view, 0, 1);
    const SearchOutcome global = dijkstra(view, 0, 1);

    REQUIRE(r.path.has_value());
    CHECK(r.fell_back_to_global);
    CHECK(r.path->total_length ==
          doctest::Approx(global.path->total_length).epsilon(1e-12));

    CHECK_THROWS_AS(two_phased_recompose(view, 0, 1, {0.0, true}), Error);
}

TEST_CASE("reactive algorithms are complete and never use the failed edge") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (std::uint64_t seed = 0; checked < 30; ++seed) {
        GenParams gp{static_cast<std::uint32_t>(5 + seed % 6), 3, 100.0,
                     0.6, seed};
        SkywayNetwork net = [&]() -> SkywayNetwork {
            try {
                return generate_network(gp);
            } catch (const Error&) {
                return fixtures::net5();
            }
        }();
        if (net.num_nodes() < 3 || net.num_nodes() > 10) continue;
        ++checked;

        const Edge& e = net.edges()[rng() % net.num_edges()];
        const NetworkView view = with_failed_edge(net, e.u, e.v);
        const auto oracle = brute_force_shortest(view, e.u, e.v);
        const SearchOutcome global = dijkstra(view, e.u, e.v);

        const RecompositionResult results[] = {
            radius_recompose(view, e.u, e.v),
            cell_density_recompose(view, e.u, e.v, net.network_size() / 4.0),
            two_phased_recompose(view, e.u, e.v),
        };
        for (const RecompositionResult& r : results) {
            CHECK(r.path.has_value() == oracle.has_value());
            CHECK(counts_non_decreasing(r.allowed_node_counts));
            CHECK(r.iterations == r.regions.size());
            if (r.path) {
                CHECK_FALSE(path_uses_edge(*r.path, e.u, e.v));
                CHECK(r.path->total_length >=
                      oracle->total_length - 1e-9 * oracle->total_length);
                if (r.fell_back_to_global) {
                    CHECK(r.path->total_length ==
                          doctest::Approx(global.path->total_length));
                }
            }
        }
    }
}

TEST_CASE("recomposition is deterministic") {
    const SkywayNetwork net = generate_network({150, 5, 1000.0, 0.2, 31});
    const Edge& e = net.edges()[7 % net.num_edges()];
    const NetworkView view = with_failed_edge(net, e.u, e.v);

    const RecompositionResult a = two_phased_recompose(view, e.u, e.v);
    const RecompositionResult b = two_phased_recompose(view, e.u, e.v);
    REQUIRE(a.path.has_value() == b.path.has_value());
    if (a.path) CHECK(a.path->nodes == b.path->nodes);
    CHECK(a.allowed_node_counts == b.allowed_node_counts);
    CHECK(a.iterations == b.iterations);

    const RecompositionResult c = radius_recompose(view, e.u, e.v);
    const RecompositionResult d = radius_recompose(view, e.u, e.v);
    if (c.path) CHECK(c.path->nodes == d.path->nodes);
}

TEST_CASE("recomposition json includes the reported fields") {
    const SkywayNetwork net = fixtures::net5();
    const NetworkView view = with_failed_edge(net, 0, 1);
    const std::string j =
        recomposition_to_json(two_phased_recompose(view, 0, 1), true);
    CHECK(j.find("\"path\"") != std::string::npos);
    CHECK(j.find("\"regions\"") != std::string::npos);
    CHECK(j.find("\"stage_skips\"") != std::string::npos);
    CHECK(j.find("\"search_ns\": 0") != std::string::npos);
}

TEST_CASE("stage skipping analysis is deterministic and cross-checks") {
    SkipAnalysisParams params;
    params.min_nodes = 300;
    params.max_nodes = 600;

    const SkipReport first = analyze_stage_skipping(params, 40, 5);
    const SkipReport second = analyze_stage_skipping(params, 40, 5);
    CHECK(first.scenarios == 40);
    CHECK(first.effective_count == second.effective_count);
    CHECK(first.ineffective_count == second.ineffective_count);
    REQUIRE(first.events.size() == second.events.size());
    for (std::size_t i = 0; i < first.events.size(); ++i) {
        CHECK(first.events[i].scenario == second.events[i].scenario);
        CHECK(first.events[i].effective == second.events[i].effective);
    }

    // classifications agree with a direct re-search of the skipped stage
    for (const SkipEvent& ev : first.events) {
        const SkywayNetwork net = generate_network(ev.gen);
        const NetworkView view =
            with_failed_edge(net, ev.failed_edge.first, ev.failed_edge.second);
        const Point pa = net.node(ev.failed_edge.first).pos();
        const Point pb = net.node(ev.failed_edge.second).pos();
        const RhombusRegions rr = build_rhombus_regions(
            net, pa, pb, params.val_frac * euclidean(pa, pb));
        const ConvexPolygonRegion& region =
            ev.stage == Phase1Stage::kTriangle ? rr.triangle
            : ev.stage == Phase1Stage::kMidpointRhombus ? rr.midpoint
                                                        : rr.full;
        std::vector<int> allowed = nodes_in_region(net, Region{region});
        allowed.push_back(ev.failed_edge.first);
        allowed.push_back(ev.failed_edge.second);
        const SearchOutcome direct = dijkstra(
            view, ev.failed_edge.first, ev.failed_edge.second, &allowed);
        CHECK(ev.effective == !direct.path.has_value());
    }

    const std::string j = skip_report_to_json(first);
    CHECK(j.find("\"effective_count\"") != std::string::npos);

    CHECK_THROWS_AS(analyze_stage_skipping(params, 0, 1), Error);
}

TEST_CASE("skip analysis without events reports the scenario count") {
    // narrow corridors on tiny networks never reach the skip thresholds
    SkipAnalysisParams params;
    params.min_nodes = 60;
    params.max_nodes = 120;
    params.val_frac = 0.5;
    const SkipReport report = analyze_stage_skipping(params, 5, 2);
    CHECK(report.scenarios == 5);
    CHECK(report.events.empty());
    CHECK(report.effective_count == 0);
    CHECK(report.ineffective_count == 0);
}
