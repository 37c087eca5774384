#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsp/graph.hpp"
#include "rsp/scenario.hpp"
#include "rsp/solvers.hpp"

namespace rsp {

struct Metrics {
    double average = 0.0;
    double worst = 0.0;
    double cvar = 0.0;  // mean of the ceil(beta * N) largest path costs
    std::size_t scenario_count = 0;
};

Metrics evaluate_path(const Path& path, const ScenarioMatrix& scenarios, double beta = 0.05);

using NodePair = std::pair<NodeId, NodeId>;

/// `count` uniformly drawn pairs with s != t and t reachable from s; unreachable draws are redrawn.
std::vector<NodePair> generate_pairs(const Graph& graph, std::size_t count, std::uint64_t seed);

/// One uncertainty family swept over its parameter values; kind "average" ignores the values.
struct MethodSweep {
    std::string kind;
    std::vector<double> params;
};

/// Average case plus 20 values for each of the six set families (121 combinations).
std::vector<MethodSweep> default_method_grid();

/// Expands sweeps into (method, parameter) combinations, in sweep order.
std::vector<std::pair<Method, double>> expand_methods(const std::vector<MethodSweep>& sweeps);

struct ExperimentConfig {
    std::string graph_file;
    std::string scenarios_file;
    std::string unit = "minutes";  // or "mph" (speed table; graph must carry lengths)
    std::optional<TimeWindow> filter;
    std::uint64_t seed = 1;
    std::size_t pairs = 200;
    double split_fraction = 0.75;
    std::vector<MethodSweep> methods = default_method_grid();
    double cvar_beta = 0.05;
    SolveOptions solve{};
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& file);

/// Loads the scenario file of `config` as travel times in minutes (cleaning speed tables first).
ScenarioMatrix load_scenarios(const ExperimentConfig& config, const Graph& graph);

struct TradeoffRecord {
    std::string method;
    double param = 0.0;
    std::string sample;  // "in" or "out"
    double avg = 0.0;
    double max_avg = 0.0;
    double cvar_avg = 0.0;
    double runtime_s = 0.0;
    std::size_t completed_pairs = 0;
    std::size_t failed_pairs = 0;
};

struct PairOutcome {
    std::size_t method_index = 0;  // into the expanded method list
    std::size_t pair_index = 0;
    bool solved = false;
    std::string error;  // set when !solved
    Path path;
    double robust_value = 0.0;
    double runtime_s = 0.0;
    Metrics in_sample;
    std::optional<Metrics> out_sample;
};

struct ExperimentResult {
    std::vector<std::pair<Method, double>> methods;
    std::vector<NodePair> pairs;
    std::size_t in_sample_size = 0;
    std::size_t out_sample_size = 0;
    std::vector<PairOutcome> outcomes;
    std::vector<TradeoffRecord> records;
};

ExperimentResult run_tradeoff_experiment(const ExperimentConfig& config, const Graph& graph,
                                         const ScenarioMatrix& scenarios);
ExperimentResult run_tradeoff_experiment(const ExperimentConfig& config);

/// Header `method,param,sample,avg,max_avg,cvar_avg,runtime_s`; aggregates cover completed pairs
/// and are "nan" when no pair completed.
std::string tradeoff_csv(const std::vector<TradeoffRecord>& records);
std::string tradeoff_json(const ExperimentResult& result);

}  // namespace rsp
