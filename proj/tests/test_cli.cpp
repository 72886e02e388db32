#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "skyway/bench.hpp"
#include "skyway/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

// Runs the CLI with stdout+stderr captured to a file.
CommandResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out =
        fs::temp_directory_path() / ("skyway_cli_out_" +
                                     std::to_string(counter++) + ".txt");
    const std::string cmd =
        std::string(SKYWAY_CLI_PATH) + " " + args + " > " + out.string() +
        " 2>&1";
    const int status = std::system(cmd.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    result.output = buf.str();
    fs::remove(out);
    return result;
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "skyway_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("generate writes a loadable network") {
    const fs::path file = temp_dir() / "gen.json";
    const CommandResult r = run_cli(
        "generate --nodes 100 --size 1000 --max-connectivity 5 "
        "--neighbor-radius-frac 0.2 --seed 42 --out " +
        file.string());
    REQUIRE(r.exit_code == 0);
    const skyway::SkywayNetwork net = skyway::load_network_file(file.string());
    CHECK(net.num_nodes() >= 2);
    CHECK(net.num_nodes() <= 100);
    CHECK(net.num_edges() >= 1);
    fs::remove(file);
}

TEST_CASE("recompose prints the fixture detour") {
    const fs::path file = temp_dir() / "net5.json";
    skyway::save_network_file(fixtures::net5(), file.string());

    for (const std::string algo :
         {std::string("two-phase"), std::string("radius"),
          std::string("cell-density"), std::string("global")}) {
        const CommandResult r = run_cli("recompose --network " + file.string() +
                                        " --fail 0,1 --algorithm " + algo +
                                        " --no-timing");
        REQUIRE_MESSAGE(r.exit_code == 0, r.output);
        CHECK(r.output.find("12.8062484") != std::string::npos);
        CHECK(r.output.find("\"search_ns\": 0") != std::string::npos);
    }
    fs::remove(file);
}

TEST_CASE("usage errors exit with status 2") {
    CHECK(run_cli("recompose --algorithm bogus").exit_code == 2);
    CHECK(run_cli("generate").exit_code == 2);  // --out is required
    CHECK(run_cli("no-such-command").exit_code == 2);
}

TEST_CASE("runtime errors exit with status 1") {
    const CommandResult r = run_cli(
        "recompose --network /does/not/exist.json --fail 0,1 "
        "--algorithm radius");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("error") != std::string::npos);

    // unknown edge in a valid network
    const fs::path file = temp_dir() / "net5b.json";
    skyway::save_network_file(fixtures::net5(), file.string());
    CHECK(run_cli("recompose --network " + file.string() +
                  " --fail 0,4 --algorithm radius")
              .exit_code == 1);
    fs::remove(file);
}

TEST_CASE("bench writes csv, records and summary") {
    const fs::path dir = temp_dir() / "bench_once";
    const CommandResult r = run_cli(
        "bench --trials 4 --nodes-min 50 --nodes-max 100 --frac-min 0.15 "
        "--frac-max 0.3 --seed 5 --jobs 2 --out " +
        dir.string());
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);

    const std::string csv = slurp(dir / "results.csv");
    CHECK(csv.rfind(skyway::kCsvHeader, 0) == 0);
    const auto records =
        skyway::records_from_json(slurp(dir / "results.json"));
    CHECK(!records.empty());
    CHECK(slurp(dir / "summary.json").find("mean_overhead") !=
          std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("bench is byte-identical under --no-timing") {
    const fs::path dir_a = temp_dir() / "bench_a";
    const fs::path dir_b = temp_dir() / "bench_b";
    const std::string common =
        "bench --trials 6 --nodes-min 50 --nodes-max 120 --frac-min 0.15 "
        "--frac-max 0.3 --seed 9 --no-timing --out ";
    REQUIRE(run_cli(common + dir_a.string()).exit_code == 0);
    REQUIRE(run_cli(common + dir_b.string() + " --jobs 2").exit_code == 0);
    CHECK(slurp(dir_a / "results.csv") == slurp(dir_b / "results.csv"));
    CHECK(slurp(dir_a / "results.json") == slurp(dir_b / "results.json"));
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("bench accepts a config file with flag overrides") {
    const fs::path dir = temp_dir() / "bench_cfg";
    const fs::path cfg = temp_dir() / "config.json";
    skyway::ExperimentConfig config;
    config.trials = 3;
    config.nodes = {50, 80};
    config.neighbor_radius_frac = {0.2, 0.3};
    config.seed = 4;
    config.algorithms = {skyway::Algorithm::kTwoPhased};
    {
        std::ofstream out(cfg);
        out << skyway::config_to_json(config);
    }
    const CommandResult r = run_cli("bench --config " + cfg.string() +
                                    " --trials 2 --out " + dir.string());
    REQUIRE_MESSAGE(r.exit_code == 0, r.output);
    const auto records =
        skyway::records_from_json(slurp(dir / "results.json"));
    CHECK(records.size() == 2);  // --trials overrode the config file
    fs::remove_all(dir);
    fs::remove(cfg);
}

TEST_CASE("skip-analysis output is deterministic") {
    const std::string args =
        "skip-analysis --scenarios 8 --seed 3 --nodes-min 60 --nodes-max 150";
    const CommandResult a = run_cli(args);
    const CommandResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("\"scenarios\": 8") != std::string::npos);
}

TEST_CASE("seed can come from the environment") {
    const fs::path file_env = temp_dir() / "env_seed.json";
    const fs::path file_flag = temp_dir() / "flag_seed.json";
    const std::string base =
        "generate --nodes 40 --size 500 --neighbor-radius-frac 0.3 --out ";

    const std::string env_cmd = "SKYWAY_SEED=77 " + std::string(SKYWAY_CLI_PATH) +
                                " " + base + file_env.string() +
                                " > /dev/null 2>&1";
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    REQUIRE(run_cli(base + file_flag.string() + " --seed 77").exit_code == 0);
    CHECK(slurp(file_env) == slurp(file_flag));

    // the flag wins over the environment
    const std::string mixed = "SKYWAY_SEED=1 " + std::string(SKYWAY_CLI_PATH) +
                              " " + base + file_env.string() +
                              " --seed 77 > /dev/null 2>&1";
    REQUIRE(std::system(mixed.c_str()) == 0);
    CHECK(slurp(file_env) == slurp(file_flag));

    fs::remove(file_env);
    fs::remove(file_flag);
}
