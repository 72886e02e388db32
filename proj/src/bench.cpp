#include "skyway/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "skyway/generate.hpp"

namespace skyway {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sample(std::mt19937_64& rng, const ValueRange& r) {
    return r.min + unit_double(rng) * (r.max - r.min);
}

std::uint32_t sample_count(std::mt19937_64& rng, const ValueRange& r) {
    const auto lo = static_cast<std::uint64_t>(std::llround(r.min));
    const auto hi = static_cast<std::uint64_t>(std::llround(r.max));
    if (hi <= lo) return static_cast<std::uint32_t>(lo);
    return static_cast<std::uint32_t>(lo + rng() % (hi - lo + 1));
}

std::string format_g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

double round_g9(double v) {
    return std::strtod(format_g9(v).c_str(), nullptr);
}

std::string encode_stage_skips(const std::vector<StageSkip>& skips) {
    std::string out;
    for (const StageSkip& s : skips) {
        if (!out.empty()) out += "|";
        out += stage_name(s.stage) + ":" + (s.skipped ? "1" : "0");
    }
    return out;
}

TrialRecord base_record(std::size_t trial, const SkywayNetwork& net, int fu,
                        int fv) {
    TrialRecord rec;
    rec.trial = trial;
    rec.num_nodes = net.num_nodes();
    rec.num_edges = net.num_edges();
    rec.network_size = net.network_size();
    rec.failed_u = fu;
    rec.failed_v = fv;
    return rec;
}

}  // namespace

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kRadius:         return "radius";
        case Algorithm::kCellDensity:    return "cell-density";
        case Algorithm::kTwoPhased:      return "two-phased";
        case Algorithm::kGlobalDijkstra: return "global-dijkstra";
        case Algorithm::kAstar:          return "astar";
        case Algorithm::kBellmanFord:    return "bellman-ford";
    }
    return "unknown";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
    if (name == "radius") return Algorithm::kRadius;
    if (name == "cell-density" || name == "cell_density") {
        return Algorithm::kCellDensity;
    }
    if (name == "two-phased" || name == "two-phase" || name == "two_phased") {
        return Algorithm::kTwoPhased;
    }
    if (name == "global-dijkstra" || name == "global" || name == "dijkstra") {
        return Algorithm::kGlobalDijkstra;
    }
    if (name == "astar" || name == "a-star") return Algorithm::kAstar;
    if (name == "bellman-ford" || name == "bellman_ford") {
        return Algorithm::kBellmanFord;
    }
    return std::nullopt;
}

ExperimentRun run_experiment(const ExperimentConfig& config, unsigned jobs) {
    if (config.trials < 1) {
        throw Error("run_experiment: trials must be >= 1");
    }
    if (config.algorithms.empty()) {
        throw Error("run_experiment: no algorithms configured");
    }

    struct TrialOutput {
        std::vector<TrialRecord> records;
        std::optional<SkippedTrial> skipped;
    };
    std::vector<TrialOutput> outputs(config.trials);

    auto run_trial = [&](std::size_t trial) {
        TrialOutput& out = outputs[trial];
        std::mt19937_64 rng(mix_seed(config.seed, trial));

        GenParams gp;
        gp.num_nodes = std::max<std::uint32_t>(2, sample_count(rng, config.nodes));
        gp.max_connectivity =
            std::max<std::uint32_t>(1, sample_count(rng, config.max_connectivity));
        gp.network_size = sample(rng, config.network_size);
        gp.neighbor_radius_frac = sample(rng, config.neighbor_radius_frac);
        gp.seed = rng();

        std::optional<SkywayNetwork> maybe_net;
        for (int attempt = 0; attempt < 64 && !maybe_net; ++attempt) {
            try {
                maybe_net = generate_network(gp);
            } catch (const Error&) {
                gp.seed = mix_seed(gp.seed, 23);
            }
        }
        if (!maybe_net || maybe_net->num_nodes() < 2) {
            out.skipped = SkippedTrial{trial, "network generation failed"};
            return;
        }
        const SkywayNetwork& net = *maybe_net;

        const int src = static_cast<int>(rng() % net.num_nodes());
        int dst = static_cast<int>(rng() % net.num_nodes());
        if (dst == src) dst = (dst + 1) % static_cast<int>(net.num_nodes());
        SearchOutcome route = dijkstra(NetworkView(net), src, dst);
        if (!route.path || route.path->nodes.size() < 2) {
            out.skipped = SkippedTrial{trial, "no route between endpoints"};
            return;
        }
        const std::size_t pick = rng() % (route.path->nodes.size() - 1);
        const int fu = route.path->nodes[pick];
        const int fv = route.path->nodes[pick + 1];

        const NetworkView failed = with_failed_edge(net, fu, fv);
        SearchOutcome baseline = dijkstra(failed, fu, fv);
        if (!baseline.path) {
            out.skipped = SkippedTrial{trial, "failure disconnects endpoints"};
            return;
        }
        const double baseline_length = baseline.path->total_length;
        const double cell = config.cell_size > 0.0
                                ? config.cell_size
                                : net.network_size() / 20.0;

        for (Algorithm algo : config.algorithms) {
            TrialRecord rec = base_record(trial, net, fu, fv);
            rec.algorithm = algo;
            rec.baseline_length = baseline_length;

            auto fill_reactive = [&](const RecompositionResult& r) {
                rec.search_ns = r.search_elapsed.count();
                rec.region_ns = r.region_build_elapsed.count();
                rec.iterations = r.iterations;
                rec.fallback = r.fell_back_to_global;
                rec.stage_skips = encode_stage_skips(r.stage_skips);
                if (!r.allowed_node_counts.empty()) {
                    rec.node_compression =
                        static_cast<double>(r.allowed_node_counts.back()) /
                        static_cast<double>(net.num_nodes());
                    rec.edge_compression =
                        static_cast<double>(r.allowed_edge_counts.back()) /
                        static_cast<double>(net.num_edges());
                }
                if (r.path) {
                    rec.path_length = r.path->total_length;
                    rec.path_nodes = r.path->nodes;
                }
            };
            auto fill_global = [&](const SearchOutcome& o) {
                rec.search_ns = o.stats.elapsed.count();
                rec.region_ns = 0;
                rec.iterations = 1;
                if (o.path) {
                    rec.path_length = o.path->total_length;
                    rec.path_nodes = o.path->nodes;
                }
            };

            switch (algo) {
                case Algorithm::kRadius:
                    fill_reactive(radius_recompose(failed, fu, fv));
                    break;
                case Algorithm::kCellDensity:
                    fill_reactive(cell_density_recompose(failed, fu, fv, cell));
                    break;
                case Algorithm::kTwoPhased:
                    fill_reactive(two_phased_recompose(
                        failed, fu, fv, {config.val_frac, true}));
                    break;
                case Algorithm::kGlobalDijkstra:
                    fill_global(dijkstra(failed, fu, fv));
                    break;
                case Algorithm::kAstar:
                    fill_global(astar(failed, fu, fv));
                    break;
                case Algorithm::kBellmanFord:
                    fill_global(bellman_ford(failed, fu, fv));
                    break;
            }
            rec.distance_overhead = rec.path_length / rec.baseline_length;
            out.records.push_back(std::move(rec));
        }
    };

    const unsigned workers =
        std::max(1u, std::min<unsigned>(jobs, config.trials));
    if (workers <= 1) {
        for (std::size_t t = 0; t < config.trials; ++t) run_trial(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= config.trials) break;
                    run_trial(t);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    ExperimentRun run;
    for (TrialOutput& out : outputs) {
        if (out.skipped) run.skipped.push_back(*out.skipped);
        for (TrialRecord& rec : out.records) {
            run.records.push_back(std::move(rec));
        }
    }
    return run;
}

Summary summarize_metrics(std::span<const TrialRecord> records) {
    if (records.empty()) {
        throw Error("summarize_metrics: no records");
    }

    std::map<std::size_t, double> global_search_ns;
    for (const TrialRecord& r : records) {
        if (r.algorithm == Algorithm::kGlobalDijkstra) {
            global_search_ns[r.trial] = static_cast<double>(r.search_ns);
        }
    }

    auto percentile = [](std::vector<double> v, double p) {
        std::sort(v.begin(), v.end());
        if (v.empty()) return 0.0;
        const std::size_t idx = static_cast<std::size_t>(
            std::ceil(p * static_cast<double>(v.size())));
        return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
    };
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
    };
    // Summation in sorted order keeps summaries bit-identical under
    // record permutations.
    auto mean = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        double s = 0.0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };

    std::map<Algorithm, std::vector<const TrialRecord*>> by_algo;
    for (const TrialRecord& r : records) by_algo[r.algorithm].push_back(&r);

    Summary summary;
    for (const auto& [algo, recs] : by_algo) {
        AlgorithmStats st;
        st.count = recs.size();
        std::vector<double> search, total, overhead, node_c, edge_c, ratios;
        std::size_t fallbacks = 0;
        for (const TrialRecord* r : recs) {
            search.push_back(static_cast<double>(r->search_ns));
            total.push_back(static_cast<double>(r->search_ns + r->region_ns));
            overhead.push_back(r->distance_overhead);
            node_c.push_back(r->node_compression);
            edge_c.push_back(r->edge_compression);
            if (r->fallback) ++fallbacks;
            auto it = global_search_ns.find(r->trial);
            if (it != global_search_ns.end() && it->second > 0.0) {
                ratios.push_back(
                    static_cast<double>(r->search_ns + r->region_ns) /
                    it->second);
            }
        }
        st.mean_search_ns = mean(search);
        st.median_search_ns = median(search);
        st.p95_search_ns = percentile(search, 0.95);
        st.mean_total_ns = mean(total);
        st.median_total_ns = median(total);
        st.p95_total_ns = percentile(total, 0.95);
        st.mean_overhead = mean(overhead);
        st.mean_node_compression = mean(node_c);
        st.mean_edge_compression = mean(edge_c);
        st.fallback_rate =
            static_cast<double>(fallbacks) / static_cast<double>(recs.size());
        st.mean_time_ratio_vs_global =
            ratios.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : mean(ratios);
        summary.emplace_back(algo, st);
    }
    return summary;
}

const char* const kCsvHeader =
    "trial,algorithm,num_nodes,num_edges,network_size,failed_u,failed_v,"
    "search_ns,region_ns,path_length,baseline_length,distance_overhead,"
    "node_compression,edge_compression,iterations,fallback,stage_skips";

void emit_csv(std::span<const TrialRecord> records, std::ostream& out,
              bool zero_timing) {
    out << kCsvHeader << "\n";
    for (const TrialRecord& r : records) {
        out << r.trial << "," << algorithm_name(r.algorithm) << ","
            << r.num_nodes << "," << r.num_edges << ","
            << format_g9(r.network_size) << "," << r.failed_u << ","
            << r.failed_v << "," << (zero_timing ? 0 : r.search_ns) << ","
            << (zero_timing ? 0 : r.region_ns) << ","
            << format_g9(r.path_length) << "," << format_g9(r.baseline_length)
            << "," << format_g9(r.distance_overhead) << ","
            << format_g9(r.node_compression) << ","
            << format_g9(r.edge_compression) << "," << r.iterations << ","
            << (r.fallback ? 1 : 0) << "," << r.stage_skips << "\n";
    }
}

std::string records_to_json(std::span<const TrialRecord> records,
                            bool zero_timing) {
    using nlohmann::json;
    json arr = json::array();
    for (const TrialRecord& r : records) {
        arr.push_back({
            {"trial", r.trial},
            {"algorithm", algorithm_name(r.algorithm)},
            {"num_nodes", r.num_nodes},
            {"num_edges", r.num_edges},
            {"network_size", round_g9(r.network_size)},
            {"failed_u", r.failed_u},
            {"failed_v", r.failed_v},
            {"search_ns", zero_timing ? 0 : r.search_ns},
            {"region_ns", zero_timing ? 0 : r.region_ns},
            {"path_length", round_g9(r.path_length)},
            {"baseline_length", round_g9(r.baseline_length)},
            {"distance_overhead", round_g9(r.distance_overhead)},
            {"node_compression", round_g9(r.node_compression)},
            {"edge_compression", round_g9(r.edge_compression)},
            {"iterations", r.iterations},
            {"fallback", r.fallback},
            {"stage_skips", r.stage_skips},
            {"path_nodes", r.path_nodes},
        });
    }
    return arr.dump(2);
}

std::vector<TrialRecord> records_from_json(const std::string& text) {
    using nlohmann::json;
    json arr;
    try {
        arr = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("records json: ") + e.what());
    }
    if (!arr.is_array()) {
        throw ParseError("records json: expected a top-level array");
    }
    std::vector<TrialRecord> out;
    out.reserve(arr.size());
    for (const json& j : arr) {
        TrialRecord r;
        r.trial = j.at("trial").get<std::size_t>();
        auto algo = algorithm_from_name(j.at("algorithm").get<std::string>());
        if (!algo) throw ParseError("records json: unknown algorithm name");
        r.algorithm = *algo;
        r.num_nodes = j.at("num_nodes").get<std::size_t>();
        r.num_edges = j.at("num_edges").get<std::size_t>();
        r.network_size = j.at("network_size").get<double>();
        r.failed_u = j.at("failed_u").get<int>();
        r.failed_v = j.at("failed_v").get<int>();
        r.search_ns = j.at("search_ns").get<std::int64_t>();
        r.region_ns = j.at("region_ns").get<std::int64_t>();
        r.path_length = j.at("path_length").get<double>();
        r.baseline_length = j.at("baseline_length").get<double>();
        r.distance_overhead = j.at("distance_overhead").get<double>();
        r.node_compression = j.at("node_compression").get<double>();
        r.edge_compression = j.at("edge_compression").get<double>();
        r.iterations = j.at("iterations").get<std::size_t>();
        r.fallback = j.at("fallback").get<bool>();
        r.stage_skips = j.at("stage_skips").get<std::string>();
        r.path_nodes = j.at("path_nodes").get<std::vector<int>>();
        out.push_back(std::move(r));
    }
    return out;
}

std::string summary_to_json(const Summary& summary, bool zero_timing) {
    using nlohmann::json;
    json j = json::object();
    for (const auto& [algo, st] : summary) {
        json s = {
            {"count", st.count},
            {"mean_search_ns", zero_timing ? 0.0 : round_g9(st.mean_search_ns)},
            {"median_search_ns",
             zero_timing ? 0.0 : round_g9(st.median_search_ns)},
            {"p95_search_ns", zero_timing ? 0.0 : round_g9(st.p95_search_ns)},
            {"mean_total_ns", zero_timing ? 0.0 : round_g9(st.mean_total_ns)},
            {"median_total_ns",
             zero_timing ? 0.0 : round_g9(st.median_total_ns)},
            {"p95_total_ns", zero_timing ? 0.0 : round_g9(st.p95_total_ns)},
            {"mean_overhead", round_g9(st.mean_overhead)},
            {"mean_node_compression", round_g9(st.mean_node_compression)},
            {"mean_edge_compression", round_g9(st.mean_edge_compression)},
            {"fallback_rate", round_g9(st.fallback_rate)},
        };
        if (std::isnan(st.mean_time_ratio_vs_global) || zero_timing) {
            s["mean_time_ratio_vs_global"] = nullptr;
        } else {
            s["mean_time_ratio_vs_global"] =
                round_g9(st.mean_time_ratio_vs_global);
        }
        j[algorithm_name(algo)] = std::move(s);
    }
    return j.dump(2);
}

std::string config_to_json(const ExperimentConfig& config) {
    using nlohmann::json;
    auto range = [](const ValueRange& r) {
        return json{{"min", r.min}, {"max", r.max}};
    };
    json algos = json::array();
    for (Algorithm a : config.algorithms) algos.push_back(algorithm_name(a));
    json j = {
        {"trials", config.trials},
        {"seed", config.seed},
        {"nodes", range(config.nodes)},
        {"max_connectivity", range(config.max_connectivity)},
        {"network_size", range(config.network_size)},
        {"neighbor_radius_frac", range(config.neighbor_radius_frac)},
        {"algorithms", std::move(algos)},
        {"cell_size", config.cell_size},
        {"val_frac", config.val_frac},
    };
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
    ExperimentConfig config;
    auto range = [&](const char* key, ValueRange& out) {
        auto it = j.find(key);
        if (it == j.end()) return;
        out.min = it->at("min").get<double>();
        out.max = it->at("max").get<double>();
    };
    if (j.contains("trials")) config.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
    range("nodes", config.nodes);
    range("max_connectivity", config.max_connectivity);
    range("network_size", config.network_size);
    range("neighbor_radius_frac", config.neighbor_radius_frac);
    if (j.contains("cell_size")) config.cell_size = j["cell_size"].get<double>();
    if (j.contains("val_frac")) config.val_frac = j["val_frac"].get<double>();
    if (j.contains("algorithms")) {
        config.algorithms.clear();
        for (const json& a : j["algorithms"]) {
            auto algo = algorithm_from_name(a.get<std::string>());
            if (!algo) {
                throw ParseError("experiment config: unknown algorithm '" +
                                 a.get<std::string>() + "'");
            }
            config.algorithms.push_back(*algo);
        }
    }
    return config;
}

}  // namespace skyway
