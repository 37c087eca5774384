#include "rsp/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rsp/error.hpp"

namespace rsp {

namespace {

using json = nlohmann::json;

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

int parse_clock(const std::string& text) {
    int h = 0, m = 0;
    char colon = 0;
    std::istringstream in(text);
    if (!(in >> h >> colon >> m) || colon != ':' || h < 0 || h > 24 || m < 0 || m > 59)
        throw Error(ErrorCode::ParseError, "bad time of day '" + text + "'");
    return h * 60 + m;
}

TimeWindow parse_window(const json& j) {
    if (j.is_string()) return TimeWindow::preset(j.get<std::string>());
    TimeWindow w;
    if (j.contains("days")) {
        static const char* names[] = {"sun", "mon", "tue", "wed", "thu", "fri", "sat"};
        w.days.reset();
        const json& days = j["days"];
        if (days.is_string() && days.get<std::string>() == "weekdays") {
            w.days = std::bitset<7>{0b0111110};
        } else if (days.is_string() && days.get<std::string>() == "weekends") {
            w.days = std::bitset<7>{0b1000001};
        } else {
            for (const auto& d : days) {
                const std::string name = d.get<std::string>();
                const auto it = std::find(std::begin(names), std::end(names), name.substr(0, 3));
                if (it == std::end(names)) throw Error(ErrorCode::ParseError, "unknown day '" + name + "'");
                w.days.set(static_cast<std::size_t>(it - std::begin(names)));
            }
        }
    }
    if (j.contains("start")) w.start_minute = parse_clock(j["start"].get<std::string>());
    if (j.contains("end")) w.end_minute = parse_clock(j["end"].get<std::string>());
    return w;
}

}  // namespace

Metrics evaluate_path(const Path& path, const ScenarioMatrix& scenarios, double beta) {
    if (scenarios.empty()) throw Error(ErrorCode::EmptyMatrix, "no scenarios to evaluate on");
    if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "beta must be in (0, 1]");
    std::vector<double> costs = scenarios.path_costs(path);
    const std::size_t n = costs.size();
    std::sort(costs.begin(), costs.end(), std::greater<>());
    // guard against products like 0.05 * 40 landing a hair above an integer
    const auto k = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::ceil(beta * static_cast<double>(n) - 1e-9)), 1, n);
    Metrics m;
    m.scenario_count = n;
    m.worst = costs.front();
    double tail = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += costs[i];
        if (i < k) tail += costs[i];
    }
    m.average = total / static_cast<double>(n);
    m.cvar = tail / static_cast<double>(k);
    // the order average <= cvar <= worst holds exactly; rounding in the sums may not respect it
    m.cvar = std::clamp(m.cvar, std::min(m.average, m.worst), m.worst);
    return m;
}

std::vector<NodePair> generate_pairs(const Graph& graph, std::size_t count, std::uint64_t seed) {
    if (graph.node_count() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two nodes to draw pairs");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<NodeId> node(0, graph.node_count() - 1);
    std::vector<NodePair> pairs;
    pairs.reserve(count);
    const std::size_t max_draws = 100 * std::max<std::size_t>(count, 1);
    std::size_t draws = 0;
    while (pairs.size() < count) {
        if (draws++ >= max_draws)
            throw Error(ErrorCode::InsufficientConnectivity,
                        "could not draw " + std::to_string(count) + " connected pairs in " +
                            std::to_string(max_draws) + " draws");
        const NodeId s = node(rng);
        const NodeId t = node(rng);
        if (s == t || !reachable(graph, s, t)) continue;
        pairs.emplace_back(s, t);
    }
    return pairs;
}

std::vector<MethodSweep> default_method_grid() {
    MethodSweep hull{"convex-hull", {}}, interval{"interval", {}}, ellipsoid{"ellipsoid", {}},
        budgeted{"budgeted", {}}, perm{"permutohull", {}}, sym{"sym-permutohull", {}};
    for (int k = 1; k <= 20; ++k) {
        hull.params.push_back(k / 20.0);
        interval.params.push_back(k / 20.0);
        ellipsoid.params.push_back(k / 2.0);
        budgeted.params.push_back(k);
        perm.params.push_back(2 * k - 1);
        sym.params.push_back(k);
    }
    return {{"average", {0.0}}, hull, interval, ellipsoid, budgeted, perm, sym};
}

std::vector<std::pair<Method, double>> expand_methods(const std::vector<MethodSweep>& sweeps) {
    std::vector<std::pair<Method, double>> out;
    for (const MethodSweep& sweep : sweeps) {
        if (sweep.kind == "average") {
            out.emplace_back(std::nullopt, sweep.params.empty() ? 0.0 : sweep.params.front());
            continue;
        }
        for (double p : sweep.params) out.emplace_back(parse_method(sweep.kind + ":" + number(p)), p);
    }
    return out;
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    ExperimentConfig config;
    try {
        const json j = json::parse(json_text);
        config.graph_file = j.at("graph").get<std::string>();
        config.scenarios_file = j.at("scenarios").get<std::string>();
        config.unit = j.value("unit", config.unit);
        if (config.unit != "minutes" && config.unit != "mph")
            throw Error(ErrorCode::ParseError, "unit must be minutes or mph");
        if (j.contains("filter") && !j["filter"].is_null()) config.filter = parse_window(j["filter"]);
        config.seed = j.value("seed", config.seed);
        config.pairs = j.value("pairs", config.pairs);
        config.split_fraction = j.value("split_fraction", config.split_fraction);
        config.cvar_beta = j.value("cvar_beta", config.cvar_beta);
        if (j.contains("methods")) {
            config.methods.clear();
            for (const auto& m : j["methods"])
                config.methods.push_back({m.at("kind").get<std::string>(), m.value("params", std::vector<double>{})});
        }
        config.solve.minmax.max_nodes = j.value("max_nodes", config.solve.minmax.max_nodes);
        config.solve.path_limit = j.value("path_limit", config.solve.path_limit);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("experiment config: ") + e.what());
    }
    expand_methods(config.methods);  // validates kinds and parameters early
    return config;
}

ExperimentConfig load_experiment_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    ExperimentConfig config = parse_experiment_config(buffer.str());
    // data paths are relative to the config file
    const auto base = std::filesystem::path(file).parent_path();
    auto resolve = [&](std::string& p) {
        if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
    };
    resolve(config.graph_file);
    resolve(config.scenarios_file);
    return config;
}

ScenarioMatrix load_scenarios(const ExperimentConfig& config, const Graph& graph) {
    if (config.unit == "mph") {
        if (!graph.has_lengths()) throw Error(ErrorCode::InvalidGraph, "mph input needs length_miles on every arc");
        return to_travel_times(clean_speed_records(read_speed_csv(config.scenarios_file)), graph.lengths_miles());
    }
    return read_scenario_csv(config.scenarios_file);
}

ExperimentResult run_tradeoff_experiment(const ExperimentConfig& config, const Graph& graph,
                                         const ScenarioMatrix& all_scenarios) {
    if (all_scenarios.cols() != graph.arc_count())
        throw Error(ErrorCode::DimensionMismatch, "scenario columns must match the graph's arcs");
    const ScenarioMatrix scenarios = config.filter ? filter_scenarios(all_scenarios, *config.filter) : all_scenarios;
    const SampleSplit split = split_sample(scenarios, config.split_fraction, config.seed);
    if (split.in_sample.empty()) throw Error(ErrorCode::EmptyMatrix, "in-sample part is empty");

    ExperimentResult result;
    result.methods = expand_methods(config.methods);
    const bool needs_full = std::any_of(result.methods.begin(), result.methods.end(), [](const auto& m) {
        return m.first && m.first->kind == SetKind::Ellipsoid && !m.first->diagonal_only;
    });
    const ScenarioStats stats = compute_stats(split.in_sample, needs_full);
    result.pairs = generate_pairs(graph, config.pairs, config.seed);
    result.in_sample_size = split.in_sample.rows();
    result.out_sample_size = split.out_sample.rows();

    for (std::size_t mi = 0; mi < result.methods.size(); ++mi) {
        const Method& method = result.methods[mi].first;
        for (std::size_t pi = 0; pi < result.pairs.size(); ++pi) {
            PairOutcome o;
            o.method_index = mi;
            o.pair_index = pi;
            const auto start = std::chrono::steady_clock::now();
            try {
                RobustSolution sol = solve_robust(graph, method, split.in_sample, stats, result.pairs[pi].first,
                                                  result.pairs[pi].second, config.solve);
                o.solved = true;
                o.path = std::move(sol.path);
                o.robust_value = sol.robust_value;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::NodeBudgetExceeded && e.code() != ErrorCode::LimitExceeded) throw;
                o.error = std::string(to_string(ErrorCode::UnsupportedExactSolve)) + ": " + e.what();
            }
            o.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            if (o.solved) {
                o.in_sample = evaluate_path(o.path, split.in_sample, config.cvar_beta);
                if (!split.out_sample.empty()) o.out_sample = evaluate_path(o.path, split.out_sample, config.cvar_beta);
            }
            result.outcomes.push_back(std::move(o));
        }
    }

    // outcomes are stored method-major, pair-minor, so aggregation order is fixed
    const std::size_t pair_count = result.pairs.size();
    for (std::size_t mi = 0; mi < result.methods.size(); ++mi) {
        for (const std::string sample : {"in", "out"}) {
            if (sample == "out" && split.out_sample.empty()) continue;
            TradeoffRecord r;
            r.method = method_name(result.methods[mi].first);
            r.param = result.methods[mi].second;
            r.sample = sample;
            for (std::size_t pi = 0; pi < pair_count; ++pi) {
                const PairOutcome& o = result.outcomes[mi * pair_count + pi];
                r.runtime_s += o.runtime_s;
                if (!o.solved) {
                    ++r.failed_pairs;
                    continue;
                }
                const Metrics& m = sample == "in" ? o.in_sample : *o.out_sample;
                ++r.completed_pairs;
                r.avg += m.average;
                r.max_avg += m.worst;
                r.cvar_avg += m.cvar;
            }
            if (r.completed_pairs == 0) {
                r.avg = r.max_avg = r.cvar_avg = std::numeric_limits<double>::quiet_NaN();
            } else {
                const auto c = static_cast<double>(r.completed_pairs);
                r.avg /= c;
                r.max_avg /= c;
                r.cvar_avg /= c;
            }
            result.records.push_back(std::move(r));
        }
    }
    return result;
}

ExperimentResult run_tradeoff_experiment(const ExperimentConfig& config) {
    const Graph graph = load_graph_json(config.graph_file);
    const ScenarioMatrix scenarios = load_scenarios(config, graph);
    return run_tradeoff_experiment(config, graph, scenarios);
}

std::string tradeoff_csv(const std::vector<TradeoffRecord>& records) {
    std::string out = "method,param,sample,avg,max_avg,cvar_avg,runtime_s\n";
    for (const TradeoffRecord& r : records) {
        out += r.method + ',' + number(r.param) + ',' + r.sample + ',' + number(r.avg) + ',' + number(r.max_avg) +
               ',' + number(r.cvar_avg) + ',' + number(r.runtime_s) + '\n';
    }
    return out;
}

std::string tradeoff_json(const ExperimentResult& result) {
    json doc;
    doc["in_sample_size"] = result.in_sample_size;
    doc["out_sample_size"] = result.out_sample_size;
    doc["pairs"] = json::array();
    for (const auto& [s, t] : result.pairs) doc["pairs"].push_back({s, t});
    doc["records"] = json::array();
    for (const TradeoffRecord& r : result.records) {
        auto value = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
        doc["records"].push_back({{"method", r.method},
                                  {"param", r.param},
                                  {"sample", r.sample},
                                  {"avg", value(r.avg)},
                                  {"max_avg", value(r.max_avg)},
                                  {"cvar_avg", value(r.cvar_avg)},
                                  {"runtime_s", r.runtime_s},
                                  {"completed_pairs", r.completed_pairs},
                                  {"failed_pairs", r.failed_pairs}});
    }
    return doc.dump(2);
}

}  // namespace rsp
