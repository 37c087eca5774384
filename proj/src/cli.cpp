#include "rsp/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsp/bench.hpp"
#include "rsp/error.hpp"
#include "rsp/evaluation.hpp"
#include "rsp/graph.hpp"
#include "rsp/scenario.hpp"
#include "rsp/solvers.hpp"

namespace rsp {

namespace {

using json = nlohmann::json;

// Raised for bad option values that CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--seed", common.seed, "Seed for every random draw");
    cmd->add_option("--out", common.out, "Write the result to this file instead of stdout");
    cmd->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Common& common, std::ostream& out, const std::string& text) {
    if (common.out.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
        return;
    }
    std::ofstream file(common.out);
    if (!file) throw Error(ErrorCode::IoError, "cannot write " + common.out);
    file << text;
    if (!text.empty() && text.back() != '\n') file << '\n';
}

template <class F>
auto usage(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

std::string number(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

struct DataOptions {
    std::string graph;
    std::string scenarios;
    std::string unit = "minutes";
    std::string filter;
};

void add_data(CLI::App* cmd, DataOptions& data, bool graph_required) {
    auto* g = cmd->add_option("--graph", data.graph, "Graph JSON file")->check(CLI::ExistingFile);
    if (graph_required) g->required();
    cmd->add_option("--scenarios", data.scenarios, "Scenario CSV file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--unit", data.unit, "Scenario values: travel minutes or speeds in mph")
        ->check(CLI::IsMember({"minutes", "mph"}));
    cmd->add_option("--filter", data.filter, "Time window: all, mornings, evenings, tuesdays, weekends");
}

ScenarioMatrix load_data(const DataOptions& data, const std::optional<Graph>& graph) {
    ExperimentConfig config;
    config.scenarios_file = data.scenarios;
    config.unit = data.unit;
    ScenarioMatrix m;
    if (data.unit == "mph") {
        if (!graph) throw UsageError("--unit mph needs --graph for arc lengths");
        m = load_scenarios(config, *graph);
    } else {
        m = read_scenario_csv(data.scenarios);
    }
    if (!data.filter.empty()) m = filter_scenarios(m, TimeWindow::preset(data.filter));
    return m;
}

std::string stats_output(const ScenarioMatrix& m, const ScenarioStats& st, const std::string& format) {
    if (format == "json") {
        json doc;
        doc["scenarios"] = m.rows();
        doc["arcs"] = json::array();
        for (std::size_t e = 0; e < st.arc_count(); ++e) {
            doc["arcs"].push_back({{"arc", e},
                                   {"mean", st.mean[e]},
                                   {"lower", st.lower[e]},
                                   {"upper", st.upper[e]},
                                   {"variance", st.diag_variance[e]}});
        }
        return doc.dump(2);
    }
    std::string out = "arc,mean,lower,upper,variance\n";
    for (std::size_t e = 0; e < st.arc_count(); ++e) {
        out += std::to_string(e) + ',' + number(st.mean[e]) + ',' + number(st.lower[e]) + ',' + number(st.upper[e]) +
               ',' + number(st.diag_variance[e]) + '\n';
    }
    return out;
}

std::string solve_output(const RobustSolution& sol, const std::string& format) {
    if (format == "csv") {
        std::string nodes;
        for (NodeId v : sol.path.nodes()) nodes += (nodes.empty() ? "" : " ") + std::to_string(v);
        return "path,robust_value,sp_calls,nodes_explored,runtime_seconds\n" + nodes + ',' +
               number(sol.robust_value) + ',' + std::to_string(sol.sp_calls) + ',' +
               std::to_string(sol.nodes_explored) + ',' + number(sol.runtime_seconds) + '\n';
    }
    json doc;
    doc["path"] = std::vector<NodeId>(sol.path.nodes().begin(), sol.path.nodes().end());
    doc["robust_value"] = sol.robust_value;
    doc["sp_calls"] = sol.sp_calls;
    doc["nodes_explored"] = sol.nodes_explored;
    doc["runtime_seconds"] = sol.runtime_seconds;
    return doc.dump(2);
}

std::string paths_output(const std::vector<Path>& paths, const std::string& format) {
    if (format == "json") {
        json doc = json::array();
        for (const Path& p : paths) doc.push_back(std::vector<NodeId>(p.nodes().begin(), p.nodes().end()));
        return doc.dump();
    }
    std::string out = "index,nodes\n";
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::string nodes;
        for (NodeId v : paths[i].nodes()) nodes += (nodes.empty() ? "" : " ") + std::to_string(v);
        out += std::to_string(i) + ',' + nodes + '\n';
    }
    return out;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) items.push_back(item);
    return items;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust shortest paths under data-driven uncertainty sets", "rsp"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    Common common;
    DataOptions data;

    auto* stats = app.add_subcommand("stats", "Per-arc statistics of a scenario file");
    add_common(stats, common);
    add_data(stats, data, false);

    std::string set = "average", algorithm = "auto";
    NodeId source = 0, target = 0;
    std::size_t max_nodes = MinMaxLimits{}.max_nodes, path_limit = SolveOptions{}.path_limit;
    auto* solve = app.add_subcommand("solve", "Robust shortest path for one source and target");
    add_common(solve, common);
    add_data(solve, data, true);
    solve->add_option("--set", set, "Uncertainty set as kind:param, or average")->required();
    solve->add_option("--source", source)->required();
    solve->add_option("--target", target)->required();
    solve->add_option("--algorithm", algorithm)->check(CLI::IsMember({"auto", "naive", "bb", "minmax", "bruteforce"}));
    solve->add_option("--max-nodes", max_nodes, "Node budget of the min-max search");
    solve->add_option("--path-limit", path_limit, "Path budget of brute force");

    std::string config_file;
    std::optional<std::size_t> pairs;
    auto* experiment = app.add_subcommand("experiment", "In-sample and out-of-sample trade-off experiment");
    add_common(experiment, common);
    experiment->add_option("--config", config_file, "Experiment JSON")->required()->check(CLI::ExistingFile);
    experiment->add_option("--pairs", pairs, "Override the number of source-target pairs");

    std::vector<int> sizes{5, 10, 20};
    std::string algorithms = "bb", orientation = "right-down";
    BenchOptions bench;
    auto* gridbench = app.add_subcommand("gridbench", "Shortest-path call counts on random grids");
    add_common(gridbench, common);
    gridbench->add_option("--sizes", sizes, "Grid sides")->delimiter(',')->check(CLI::Range(2, 1000));
    gridbench->add_option("--instances", bench.instances);
    gridbench->add_option("--algorithms", algorithms, "Comma list of naive, bb, bruteforce");
    gridbench->add_option("--samples", bench.samples, "Scenarios per instance");
    gridbench->add_option("--orientation", orientation)->check(CLI::IsMember({"right-down", "bidirected"}));
    gridbench->add_option("--lambda", bench.lambda)->check(CLI::NonNegativeNumber);
    gridbench->add_option("--path-limit", bench.path_limit);

    std::string graph_file;
    std::size_t limit = 100'000;
    auto* paths = app.add_subcommand("paths", "Enumerate simple paths");
    add_common(paths, common);
    paths->add_option("--graph", graph_file)->required()->check(CLI::ExistingFile);
    paths->add_option("--source", source)->required();
    paths->add_option("--target", target)->required();
    paths->add_option("--limit", limit, "Fail when there are more paths than this");

    std::vector<std::string> argv_text{"rsp"};
    argv_text.insert(argv_text.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& a : argv_text) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    CLI::App* used = app.get_subcommands().front();
    try {
        if (used == stats) {
            std::optional<Graph> graph;
            if (!data.graph.empty()) graph = load_graph_json(data.graph);
            const ScenarioMatrix m = load_data(data, graph);
            emit(common, out, stats_output(m, compute_stats(m, false), common.format));
        } else if (used == solve) {
            const Method method = usage([&] { return parse_method(set); });
            SolveOptions options;
            options.algorithm = usage([&] { return parse_algorithm(algorithm); });
            options.minmax.max_nodes = max_nodes;
            options.path_limit = path_limit;
            if (!data.filter.empty()) usage([&] { return TimeWindow::preset(data.filter); });
            const Graph graph = load_graph_json(data.graph);
            const ScenarioMatrix m = load_data(data, graph);
            const bool full = method && method->kind == SetKind::Ellipsoid && !method->diagonal_only;
            const ScenarioStats st = compute_stats(m, full);
            emit(common, out, solve_output(solve_robust(graph, method, m, st, source, target, options), common.format));
        } else if (used == experiment) {
            ExperimentConfig config = load_experiment_config(config_file);
            if (common.seed) config.seed = *common.seed;
            if (pairs) config.pairs = *pairs;
            const ExperimentResult result = run_tradeoff_experiment(config);
            emit(common, out, common.format == "json" ? tradeoff_json(result) : tradeoff_csv(result.records));
        } else if (used == gridbench) {
            bench.sizes = sizes;
            bench.algorithms = split_list(algorithms);
            bench.orientation = parse_orientation(orientation);
            if (common.seed) bench.seed = *common.seed;
            for (const std::string& a : bench.algorithms) {
                if (a != "naive" && a != "bb" && a != "bruteforce") throw UsageError("unknown algorithm '" + a + "'");
            }
            const BenchReport report = run_grid_benchmark(bench);
            emit(common, out, common.format == "json" ? bench_json(report) : bench_csv(report));
        } else if (used == paths) {
            const Graph graph = load_graph_json(graph_file);
            emit(common, out, paths_output(enumerate_simple_paths(graph, source, target, limit), common.format));
        }
    } catch (const UsageError& e) {
        err << "rsp " << used->get_name() << ": " << e.what() << "\n\n" << used->help();
        return 2;
    } catch (const Error& e) {
        err << "rsp " << used->get_name() << ": " << to_string(e.code()) << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace rsp
