#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skyway/reactive.hpp"

namespace skyway {

enum class Algorithm {
    kRadius,
    kCellDensity,
    kTwoPhased,
    kGlobalDijkstra,
    kAstar,
    kBellmanFord,
};

std::string algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

struct ValueRange {
    double min = 0.0;
    double max = 0.0;
};

struct ExperimentConfig {
    ValueRange nodes{100, 5000};
    ValueRange max_connectivity{5, 20};
    ValueRange network_size{1000, 10000};
    ValueRange neighbor_radius_frac{0.05, 0.3};
    std::size_t trials = 1;
    std::vector<Algorithm> algorithms{
        Algorithm::kRadius, Algorithm::kCellDensity, Algorithm::kTwoPhased,
        Algorithm::kGlobalDijkstra};
    double cell_size = 0.0;  // <= 0 picks network_size / 20 per trial
    double val_frac = 0.5;
    std::uint64_t seed = 0;
};

struct TrialRecord {
    std::size_t trial = 0;
    Algorithm algorithm = Algorithm::kGlobalDijkstra;
    std::size_t num_nodes = 0;
    std::size_t num_edges = 0;
    double network_size = 0.0;
    int failed_u = -1;
    int failed_v = -1;
    std::int64_t search_ns = 0;
    std::int64_t region_ns = 0;
    double path_length = 0.0;
    double baseline_length = 0.0;
    double distance_overhead = 1.0;
    double node_compression = 1.0;
    double edge_compression = 1.0;
    std::size_t iterations = 1;
    bool fallback = false;
    std::string stage_skips;      // "triangle:1|midpoint-rhombus:0|..."
    std::vector<int> path_nodes;  // JSON output only, never in the CSV
};

struct SkippedTrial {
    std::size_t trial = 0;
    std::string reason;
};

struct ExperimentRun {
    std::vector<TrialRecord> records;
    std::vector<SkippedTrial> skipped;
};

/// Per trial: a seeded random network, a random failed edge drawn from a
/// random shortest path, and every configured algorithm run against the
/// identical failed view. Deterministic for a given config seed; `jobs`
/// only parallelizes independent trials.
ExperimentRun run_experiment(const ExperimentConfig& config,
                             unsigned jobs = 1);

struct AlgorithmStats {
    std::size_t count = 0;
    double mean_search_ns = 0.0;
    double median_search_ns = 0.0;
    double p95_search_ns = 0.0;
    double mean_total_ns = 0.0;
    double median_total_ns = 0.0;
    double p95_total_ns = 0.0;
    double mean_overhead = 0.0;
    double mean_node_compression = 0.0;
    double mean_edge_compression = 0.0;
    double fallback_rate = 0.0;
    // total time over the paired global-dijkstra search time, averaged
    // per trial; NaN when the baseline is absent from the run
    double mean_time_ratio_vs_global = 0.0;
};

using Summary = std::vector<std::pair<Algorithm, AlgorithmStats>>;

Summary summarize_metrics(std::span<const TrialRecord> records);

extern const char* const kCsvHeader;

void emit_csv(std::span<const TrialRecord> records, std::ostream& out,
              bool zero_timing = false);
std::string records_to_json(std::span<const TrialRecord> records,
                            bool zero_timing = false);
std::vector<TrialRecord> records_from_json(const std::string& text);
std::string summary_to_json(const Summary& summary, bool zero_timing = false);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

}  // namespace skyway
