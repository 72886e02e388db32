// skyway: generate networks, recompose failed segments, run benchmark
// sweeps and the stage-skipping analysis.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "skyway/bench.hpp"
#include "skyway/generate.hpp"
#include "skyway/io.hpp"
#include "skyway/reactive.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct GenerateArgs {
    std::uint32_t nodes = 100;
    std::uint32_t max_connectivity = 5;
    double size = 1000.0;
    double frac = 0.1;
    std::uint64_t seed = 0;
    std::string out;
};

struct RecomposeArgs {
    std::string network;
    std::string fail;
    std::string algorithm = "two-phased";
    double cell_size = 0.0;
    double val_frac = 0.5;
    bool no_timing = false;
};

std::pair<int, int> parse_edge_arg(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw skyway::Error("--fail expects 'u,v'");
    }
    try {
        return {std::stoi(text.substr(0, comma)),
                std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw skyway::Error("--fail expects 'u,v' with integer node ids");
    }
}

struct BenchArgs {
    std::string config_path;
    std::string out_dir = ".";
    skyway::ExperimentConfig config;
    std::string algorithms;
    unsigned jobs = 0;
    bool no_timing = false;
};

struct SkipArgs {
    std::size_t scenarios = 69;
    std::uint64_t seed = 0;
    skyway::SkipAnalysisParams params;
};

int run_generate(const GenerateArgs& args) {
    skyway::GenParams gp{args.nodes, args.max_connectivity, args.size,
                         args.frac, args.seed};
    const skyway::SkywayNetwork net = skyway::generate_network(gp);
    skyway::save_network_file(net, args.out);
    std::cout << "wrote " << args.out << ": " << net.num_nodes() << " nodes, "
              << net.num_edges() << " edges\n";
    return kExitOk;
}

int run_recompose(const RecomposeArgs& args) {
    const skyway::SkywayNetwork net = skyway::load_network_file(args.network);
    const auto [u, v] = parse_edge_arg(args.fail);
    const skyway::NetworkView view = skyway::with_failed_edge(net, u, v);
    const double cell =
        args.cell_size > 0.0 ? args.cell_size : net.network_size() / 20.0;

    skyway::RecompositionResult result;
    if (args.algorithm == "radius") {
        result = skyway::radius_recompose(view, u, v);
    } else if (args.algorithm == "cell-density") {
        result = skyway::cell_density_recompose(view, u, v, cell);
    } else if (args.algorithm == "two-phase" || args.algorithm == "two-phased") {
        result = skyway::two_phased_recompose(view, u, v,
                                              {args.val_frac, true});
    } else {  // global
        skyway::SearchOutcome out = skyway::dijkstra(view, u, v);
        result.path = out.path;
        result.iterations = 1;
        result.regions.emplace_back(skyway::WholeNetwork{});
        result.allowed_node_counts.push_back(net.num_nodes());
        result.allowed_edge_counts.push_back(net.num_edges());
        result.search_elapsed = out.stats.elapsed;
    }
    std::cout << skyway::recomposition_to_json(result, args.no_timing) << "\n";
    return kExitOk;
}

int run_bench(BenchArgs& args, const CLI::App* cmd) {
    skyway::ExperimentConfig config = args.config;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) {
            throw skyway::Error("cannot open config file: " + args.config_path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        config = skyway::config_from_json(buf.str());
    }
    // Explicitly passed flags override the config file.
    auto passed = [&](const std::string& flag) {
        return cmd->count(flag) > 0;
    };
    if (passed("--trials")) config.trials = args.config.trials;
    if (passed("--seed")) config.seed = args.config.seed;
    if (passed("--nodes-min")) config.nodes.min = args.config.nodes.min;
    if (passed("--nodes-max")) config.nodes.max = args.config.nodes.max;
    if (passed("--conn-min")) {
        config.max_connectivity.min = args.config.max_connectivity.min;
    }
    if (passed("--conn-max")) {
        config.max_connectivity.max = args.config.max_connectivity.max;
    }
    if (passed("--size-min")) {
        config.network_size.min = args.config.network_size.min;
    }
    if (passed("--size-max")) {
        config.network_size.max = args.config.network_size.max;
    }
    if (passed("--frac-min")) {
        config.neighbor_radius_frac.min = args.config.neighbor_radius_frac.min;
    }
    if (passed("--frac-max")) {
        config.neighbor_radius_frac.max = args.config.neighbor_radius_frac.max;
    }
    if (passed("--cell-size")) config.cell_size = args.config.cell_size;
    if (passed("--val-frac")) config.val_frac = args.config.val_frac;
    if (passed("--algorithms")) {
        config.algorithms.clear();
        std::stringstream ss(args.algorithms);
        std::string token;
        while (std::getline(ss, token, ',')) {
            auto algo = skyway::algorithm_from_name(token);
            if (!algo) {
                throw skyway::Error("unknown algorithm: " + token);
            }
            config.algorithms.push_back(*algo);
        }
    }

    const unsigned jobs =
        args.jobs > 0 ? args.jobs
                      : std::max(1u, std::thread::hardware_concurrency());
    const skyway::ExperimentRun run = skyway::run_experiment(config, jobs);

    std::filesystem::create_directories(args.out_dir);
    const auto dir = std::filesystem::path(args.out_dir);
    {
        std::ofstream csv(dir / "results.csv");
        skyway::emit_csv(run.records, csv, args.no_timing);
    }
    {
        std::ofstream json_out(dir / "results.json");
        json_out << skyway::records_to_json(run.records, args.no_timing)
                 << "\n";
    }
    {
        const skyway::Summary summary = skyway::summarize_metrics(run.records);
        std::ofstream summary_out(dir / "summary.json");
        summary_out << skyway::summary_to_json(summary, args.no_timing) << "\n";
    }
    std::cout << "wrote " << (dir / "results.csv").string() << " ("
              << run.records.size() << " records, " << run.skipped.size()
              << " skipped trials)\n";
    return kExitOk;
}

int run_skip_analysis(const SkipArgs& args) {
    const skyway::SkipReport report =
        skyway::analyze_stage_skipping(args.params, args.scenarios, args.seed);
    std::cout << skyway::skip_report_to_json(report) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skyway network reactive composition toolkit"};
    app.require_subcommand(1);

    GenerateArgs gen_args;
    CLI::App* gen = app.add_subcommand("generate", "generate a random network");
    gen->add_option("--nodes", gen_args.nodes, "number of nodes")
        ->default_val(100);
    gen->add_option("--max-connectivity", gen_args.max_connectivity,
                    "nearest-neighbor candidates per node")
        ->default_val(5);
    gen->add_option("--size", gen_args.size, "side length of the map")
        ->default_val(1000.0);
    gen->add_option("--neighbor-radius-frac", gen_args.frac,
                    "neighbor radius as a fraction of map size")
        ->default_val(0.1);
    gen->add_option("--seed", gen_args.seed, "random seed")
        ->envname("SKYWAY_SEED")
        ->default_val(0);
    gen->add_option("--out", gen_args.out, "output network file")->required();

    RecomposeArgs rec_args;
    CLI::App* rec =
        app.add_subcommand("recompose", "recompose around one failed edge");
    rec->add_option("--network", rec_args.network, "network file")->required();
    rec->add_option("--fail", rec_args.fail, "failed edge as u,v")->required();
    rec->add_option("--algorithm", rec_args.algorithm, "composition algorithm")
        ->check(CLI::IsMember({"radius", "cell-density", "two-phase",
                               "two-phased", "global"}))
        ->default_val("two-phased");
    rec->add_option("--cell-size", rec_args.cell_size,
                    "cell size (0 = network size / 20)")
        ->default_val(0.0);
    rec->add_option("--val-frac", rec_args.val_frac,
                    "corridor offset fraction of the segment length")
        ->default_val(0.5);
    rec->add_flag("--no-timing", rec_args.no_timing,
                  "zero elapsed fields for reproducible output");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "run a benchmark sweep");
    bench->add_option("--config", bench_args.config_path,
                      "experiment config JSON file");
    bench->add_option("--trials", bench_args.config.trials, "trial count")
        ->default_val(10);
    bench->add_option("--seed", bench_args.config.seed, "random seed")
        ->envname("SKYWAY_SEED")
        ->default_val(0);
    bench->add_option("--nodes-min", bench_args.config.nodes.min, "");
    bench->add_option("--nodes-max", bench_args.config.nodes.max, "");
    bench->add_option("--conn-min", bench_args.config.max_connectivity.min, "");
    bench->add_option("--conn-max", bench_args.config.max_connectivity.max, "");
    bench->add_option("--size-min", bench_args.config.network_size.min, "");
    bench->add_option("--size-max", bench_args.config.network_size.max, "");
    bench->add_option("--frac-min",
                      bench_args.config.neighbor_radius_frac.min, "");
    bench->add_option("--frac-max",
                      bench_args.config.neighbor_radius_frac.max, "");
    bench->add_option("--algorithms", bench_args.algorithms,
                      "comma-separated algorithm list");
    bench->add_option("--cell-size", bench_args.config.cell_size, "");
    bench->add_option("--val-frac", bench_args.config.val_frac, "");
    bench->add_option("--jobs", bench_args.jobs,
                      "parallel trial workers (0 = hardware cores)")
        ->default_val(0);
    bench->add_flag("--no-timing", bench_args.no_timing,
                    "zero elapsed fields for reproducible output");
    bench->add_option("--out", bench_args.out_dir, "output directory")
        ->required();

    SkipArgs skip_args;
    CLI::App* skip =
        app.add_subcommand("skip-analysis", "stage-skipping effectiveness");
    skip->add_option("--scenarios", skip_args.scenarios, "scenario count")
        ->default_val(69);
    skip->add_option("--seed", skip_args.seed, "random seed")
        ->envname("SKYWAY_SEED")
        ->default_val(0);
    skip->add_option("--nodes-min", skip_args.params.min_nodes, "");
    skip->add_option("--nodes-max", skip_args.params.max_nodes, "");
    skip->add_option("--val-frac", skip_args.params.val_frac, "");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return run_generate(gen_args);
        if (rec->parsed()) return run_recompose(rec_args);
        if (bench->parsed()) return run_bench(bench_args, bench);
        if (skip->parsed()) return run_skip_analysis(skip_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
