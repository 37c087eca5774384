#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsp/cli.hpp"
#include "rsp/graph.hpp"
#include "rsp/grid.hpp"
#include "rsp/scenario.hpp"

using namespace rsp;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = cli_main(args, out, err);
    return {status, out.str(), err.str()};
}

const std::string diamond_graph = RSP_DATA_DIR "/diamond.json";
const std::string diamond_scenarios = RSP_DATA_DIR "/diamond_scenarios.csv";

struct TempDir {
    std::filesystem::path path = std::filesystem::temp_directory_path() / "rsp_cli_test";
    TempDir() { std::filesystem::create_directories(path); }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("solve on the diamond fixture") {
    const auto r = run({"solve", "--graph", diamond_graph, "--scenarios", diamond_scenarios, "--set", "ellipsoid:1.0",
                        "--algorithm", "bb", "--source", "0", "--target", "2"});
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["robust_value"].get<double>() == 10.0);
    CHECK(doc["path"] == nlohmann::json::array({0, 2}));
    CHECK(doc.contains("sp_calls"));
    CHECK(doc.contains("nodes_explored"));
    CHECK(doc.contains("runtime_seconds"));

    const auto avg = run({"solve", "--graph", diamond_graph, "--scenarios", diamond_scenarios, "--set", "average",
                          "--source", "0", "--target", "2", "--format", "csv"});
    REQUIRE(avg.status == 0);
    CHECK(avg.out.find("0 1 2,8,") != std::string::npos);

    const auto filtered = run({"solve", "--graph", diamond_graph, "--scenarios", diamond_scenarios, "--set",
                               "convex-hull:1", "--source", "0", "--target", "2", "--filter", "weekends"});
    CHECK(filtered.status == 1);  // no weekend rows left
}

TEST_CASE("speed tables are converted with arc lengths") {
    TempDir tmp;
    std::ofstream(tmp.file("speeds.csv")) << "arc_0,arc_1,arc_2\n6,30,NA\n6,2,30\n";
    const auto r = run({"solve", "--graph", diamond_graph, "--scenarios", tmp.file("speeds.csv"), "--unit", "mph",
                        "--set", "interval:1", "--source", "0", "--target", "2"});
    REQUIRE(r.status == 0);
    // direct arc: 1 mile at 6 mph = 10 minutes; the detour's slow record (3 mph floor) makes it 10 + 1
    CHECK(nlohmann::json::parse(r.out)["robust_value"].get<double>() == doctest::Approx(10.0));
    CHECK(run({"stats", "--scenarios", tmp.file("speeds.csv"), "--unit", "mph"}).status == 2);
}

TEST_CASE("stats and paths") {
    const auto s = run({"stats", "--scenarios", diamond_scenarios});
    REQUIRE(s.status == 0);
    CHECK(s.out.rfind("arc,mean,lower,upper,variance\n", 0) == 0);
    CHECK(s.out.find("1,4,1,7,9") != std::string::npos);
    CHECK(nlohmann::json::parse(run({"stats", "--scenarios", diamond_scenarios, "--format", "json"}).out)["scenarios"] == 2);

    const auto p = run({"paths", "--graph", diamond_graph, "--source", "0", "--target", "2", "--format", "json"});
    REQUIRE(p.status == 0);
    CHECK(nlohmann::json::parse(p.out).size() == 2);
    CHECK(run({"paths", "--graph", diamond_graph, "--source", "0", "--target", "2", "--limit", "1"}).status == 1);
}

TEST_CASE("gridbench writes one row per size") {
    TempDir tmp;
    const auto r = run({"gridbench", "--sizes", "5,10,20", "--instances", "100", "--seed", "42", "--out", tmp.file("t2.csv")});
    REQUIRE(r.status == 0);
    std::ifstream in(tmp.file("t2.csv"));
    std::stringstream text;
    text << in.rdbuf();
    CHECK(count_lines(text.str()) == 4);
    CHECK(text.str().find("\n20,bb,100,") != std::string::npos);

    // the seed threads through to the instances
    const auto a = run({"gridbench", "--sizes", "6", "--instances", "3", "--seed", "1", "--algorithms", "naive"});
    const auto b = run({"gridbench", "--sizes", "6", "--instances", "3", "--seed", "1", "--algorithms", "naive"});
    auto calls = [](const std::string& csv) {
        const std::string row = csv.substr(csv.find('\n') + 1);
        std::size_t end = 0;
        for (int field = 0; field < 4; ++field) end = row.find(',', end) + 1;
        return row.substr(0, end);
    };
    CHECK(calls(a.out) == calls(b.out));
    CHECK(calls(a.out).rfind("6,naive,3,", 0) == 0);
}

TEST_CASE("experiment subcommand") {
    TempDir tmp;
    std::ofstream(tmp.file("graph.json")) << graph_to_json(grid_graph(4));
    std::ofstream(tmp.file("scenarios.csv")) << scenario_csv(correlated_grid_scenarios(4, 20, 1));
    std::ofstream(tmp.file("config.json"))
        << R"({"graph": "graph.json", "scenarios": "scenarios.csv", "pairs": 3, "seed": 2,
               "methods": [{"kind": "average", "params": [0]}, {"kind": "budgeted", "params": [1, 2]}]})";
    const auto r = run({"experiment", "--config", tmp.file("config.json")});
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("method,param,sample,avg,max_avg,cvar_avg,runtime_s\n", 0) == 0);
    CHECK(count_lines(r.out) == 7);
    const auto j = run({"experiment", "--config", tmp.file("config.json"), "--format", "json", "--seed", "5"});
    REQUIRE(j.status == 0);
    CHECK(nlohmann::json::parse(j.out)["records"].size() == 6);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"frobnicate"}).status == 2);
    CHECK(run({}).status == 2);
    CHECK(run({"solve", "--graph", diamond_graph}).status == 2);
    CHECK(run({"gridbench", "--format", "xml"}).status == 2);
    const auto bad_set = run({"solve", "--graph", diamond_graph, "--scenarios", diamond_scenarios, "--set", "sphere:1",
                              "--source", "0", "--target", "2"});
    CHECK(bad_set.status == 2);
    CHECK(bad_set.err.find("--set") != std::string::npos);
    CHECK(run({"gridbench", "--algorithms", "simplex"}).status == 2);
    CHECK(run({"--help"}).status == 0);
}

TEST_CASE("domain errors exit with 1") {
    const auto r = run({"solve", "--graph", diamond_graph, "--scenarios", diamond_scenarios, "--set", "interval:1",
                        "--source", "2", "--target", "0"});
    CHECK(r.status == 1);
    CHECK(r.err.find("NoPath") != std::string::npos);
}

TEST_CASE("the installed binary reports an unknown subcommand with status 2") {
    const int status = std::system((std::string(RSP_CLI_BINARY) + " frobnicate > /dev/null 2>&1").c_str());
    REQUIRE(WIFEXITED(status));
    CHECK(WEXITSTATUS(status) == 2);
}
