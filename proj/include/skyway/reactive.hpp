#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "skyway/geometry.hpp"
#include "skyway/pathfind.hpp"

namespace skyway {

enum class FailureType {
    kEnvironmental,
    kOperational,
    kNavigational,
    kRegulatory,
    kInfrastructure,
    kServiceLevel,
};

std::string failure_type_name(FailureType t);

struct FailureEvent {
    FailureType failure_type = FailureType::kEnvironmental;
    std::string failed_service;
    Point location;
    double timestamp = 0.0;
    std::pair<int, int> failed_edge{-1, -1};
};

enum class Phase1Stage { kTriangle = 0, kMidpointRhombus = 1, kRectangle = 2 };

std::string stage_name(Phase1Stage s);

struct StageSkip {
    Phase1Stage stage;
    bool skipped = false;
};

struct RecompositionResult {
    std::optional<Path> path;
    std::vector<Region> regions;  // one per search iteration
    std::size_t iterations = 0;
    bool fell_back_to_global = false;
    std::vector<StageSkip> stage_skips;
    int found_stage = -1;  // phase-1 stage index that produced the path
    std::chrono::nanoseconds region_build_elapsed{0};
    std::chrono::nanoseconds search_elapsed{0};
    std::vector<std::size_t> allowed_node_counts;
    std::vector<std::size_t> allowed_edge_counts;
};

/// Growing-circle recomposition between the endpoints of the removed
/// edge. The circle starts with radius |ab| at the segment midpoint and
/// grows by 0.2 * network size per failed attempt; past half the network
/// size the search goes global.
RecompositionResult radius_recompose(const NetworkView& view, int a, int b);

/// Cell-density recomposition: a density grid classifies cells, squares
/// around the neighbors of a and b (sized by cell density) form the
/// search area, growing by one cell size per failed attempt until every
/// node is covered, which triggers the global search.
RecompositionResult cell_density_recompose(const NetworkView& view, int a,
                                           int b, double cell_size);

struct TwoPhasedOptions {
    double val_frac = 0.5;      // perpendicular offset = val_frac * |ab|
    bool stage_skipping = true;
};

/// Two-phased recomposition: phase 1 tries the triangle, midpoint
/// rhombus and rectangle corridors in order (sparse stages skipped);
/// phase 2 grows the rectangle's node set by shortest incident edges
/// until a path appears or half the network forces the global search.
RecompositionResult two_phased_recompose(const NetworkView& view, int a,
                                         int b,
                                         const TwoPhasedOptions& opts = {});

std::string recomposition_to_json(const RecompositionResult& r,
                                  bool zero_timing = false);

struct SkipAnalysisParams {
    std::uint32_t min_nodes = 300;
    std::uint32_t max_nodes = 800;
    std::uint32_t min_connectivity = 5;
    std::uint32_t max_connectivity = 10;
    double min_size = 1000.0;
    double max_size = 5000.0;
    double min_frac = 0.1;
    double max_frac = 0.3;
    // Failed segments sit at nearest-neighbor scale on these networks, so
    // a corridor this wide is needed before stages hold enough nodes for
    // the skip rule to ever trigger.
    double val_frac = 3.0;
};

struct SkipEvent {
    std::size_t scenario = 0;
    GenParams gen;
    std::pair<int, int> failed_edge{-1, -1};
    Phase1Stage stage = Phase1Stage::kTriangle;
    bool effective = false;  // the skipped stage held no path
    std::size_t with_skip_final_nodes = 0;
    std::size_t without_skip_final_nodes = 0;
};

struct SkipReport {
    std::size_t scenarios = 0;
    std::size_t effective_count = 0;
    std::size_t ineffective_count = 0;
    double mean_nodes_effective = 0.0;
    double mean_nodes_ineffective = 0.0;
    // mean search space of effective events over ineffective ones
    double effective_to_ineffective_ratio = 0.0;
    std::vector<SkipEvent> events;
};

/// Runs `scenarios` seeded random failures, each recomposed twice (with
/// and without stage skipping), and classifies every skipped stage as
/// effective when the no-skip run found no path up to that stage.
SkipReport analyze_stage_skipping(const SkipAnalysisParams& params,
                                  std::size_t scenarios, std::uint64_t seed);

std::string skip_report_to_json(const SkipReport& report);

}  // namespace skyway
