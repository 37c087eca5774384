#include "rsp/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "rsp/error.hpp"

namespace rsp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

RobustSolution solve_average(const Graph& graph, const CostVector& mean, NodeId s, NodeId t) {
    const auto start = Clock::now();
    auto sp = shortest_path(graph, mean, s, t);
    RobustSolution sol;
    sol.robust_value = sp.path.cost(mean);
    sol.path = std::move(sp.path);
    sol.sp_calls = 1;
    sol.runtime_seconds = seconds_since(start);
    return sol;
}

RobustSolution solve_interval(const Graph& graph, const ScenarioStats& stats, double lambda, NodeId s, NodeId t) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error(ErrorCode::InvalidArgument, "lambda must be finite and nonnegative");
    const auto start = Clock::now();
    std::vector<double> upper(stats.arc_count());
    for (std::size_t e = 0; e < upper.size(); ++e)
        upper[e] = stats.mean[e] + lambda * (stats.upper[e] - stats.mean[e]);
    auto sp = shortest_path(graph, CostVector(std::move(upper)), s, t);
    RobustSolution sol;
    sol.robust_value = worst_case_interval(stats, lambda, sp.path);
    sol.path = std::move(sp.path);
    sol.sp_calls = 1;
    sol.runtime_seconds = seconds_since(start);
    return sol;
}

RobustSolution solve_budgeted(const Graph& graph, const ScenarioStats& stats, double gamma, NodeId s, NodeId t) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw Error(ErrorCode::InvalidArgument, "Gamma must be finite and nonnegative");
    if (gamma == 0.0) return solve_average(graph, stats.mean, s, t);
    const auto start = Clock::now();
    const std::size_t n = stats.arc_count();
    std::vector<double> deviation(n);
    for (std::size_t e = 0; e < n; ++e) deviation[e] = stats.upper[e] - stats.mean[e];

    // min over theta of Gamma*theta + SP(mean + (deviation - theta)^+); the optimum sits at a breakpoint
    std::vector<double> thetas = deviation;
    thetas.push_back(0.0);
    std::sort(thetas.begin(), thetas.end());
    thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

    RobustSolution sol;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> costs(n);
    for (double theta : thetas) {
        for (std::size_t e = 0; e < n; ++e) costs[e] = stats.mean[e] + std::max(deviation[e] - theta, 0.0);
        auto sp = shortest_path(graph, CostVector(costs), s, t);
        ++sol.sp_calls;
        const double value = gamma * theta + sp.cost;
        if (value < best) {
            best = value;
            sol.path = std::move(sp.path);
        }
    }
    sol.robust_value = worst_case_budgeted(stats, gamma, sol.path);
    sol.runtime_seconds = seconds_since(start);
    return sol;
}

CostVector ellipsoid_weights(const ScenarioStats& stats, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw Error(ErrorCode::InvalidArgument, "lambda must be finite and nonnegative");
    std::vector<double> d(stats.arc_count());
    for (std::size_t e = 0; e < d.size(); ++e) d[e] = lambda * stats.diag_variance[e];
    return CostVector(std::move(d));
}

CostVector scenario_bound_costs(const ScenarioMatrix& scenarios, const CostVector& mean,
                                std::span<const double> weights, double lambda) {
    if (weights.size() != scenarios.rows())
        throw Error(ErrorCode::DimensionMismatch, "one bound weight per scenario is required");
    if (scenarios.cols() != mean.size()) throw Error(ErrorCode::DimensionMismatch, "mean does not match scenarios");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bound weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "bound weights must sum to one");
    std::vector<double> costs(mean.size(), 0.0);
    for (std::size_t i = 0; i < scenarios.rows(); ++i) {
        if (weights[i] == 0.0) continue;
        const auto row = scenarios.row(i);
        for (std::size_t e = 0; e < costs.size(); ++e) costs[e] += weights[i] * row[e];
    }
    for (std::size_t e = 0; e < costs.size(); ++e)
        costs[e] = std::max(0.0, mean[e] + lambda * (costs[e] - mean[e]));
    return CostVector(std::move(costs));
}

CostVector minmax_bound_costs(const UncertaintySpec& spec, const ScenarioMatrix& scenarios,
                              const ScenarioStats& stats) {
    if (spec.kind == SetKind::Permutohull || spec.kind == SetKind::SymPermutohull) {
        const WeightColumn q = weight_column(spec, scenarios.rows());
        return scenario_bound_costs(scenarios, stats.mean, q.values());
    }
    return stats.mean;
}

RobustSolution solve_scenario_minmax(const Graph& graph, const PathOracle& oracle, const CostVector& bound_costs,
                                     NodeId s, NodeId t, const MinMaxLimits& limits) {
    const auto start = Clock::now();
    RobustSolution sol;
    auto seed = shortest_path(graph, bound_costs, s, t);
    const std::vector<double> to_target = distances_to(graph, bound_costs, t);
    sol.sp_calls = 2;
    double incumbent = oracle(seed.path);
    sol.path = std::move(seed.path);
    sol.nodes_explored = 1;

    struct Frame {
        NodeId node;
        double prefix;                                    // bound cost of the prefix
        std::vector<std::pair<double, ArcId>> children;  // (lower bound, arc), ascending
        std::size_t next = 0;
    };
    std::vector<bool> on_path(static_cast<std::size_t>(graph.node_count()), false);
    std::vector<ArcId> prefix_arcs;
    std::vector<Frame> stack;

    auto open = [&](NodeId u, double prefix) {
        Frame f{u, prefix, {}, 0};
        for (ArcId e : graph.out_arcs(u)) {
            const NodeId v = graph.arc(e).head;
            const double rest = to_target[static_cast<std::size_t>(v)];
            if (on_path[static_cast<std::size_t>(v)] || !std::isfinite(rest)) continue;
            f.children.emplace_back(prefix + bound_costs[static_cast<std::size_t>(e)] + rest, e);
        }
        std::sort(f.children.begin(), f.children.end());
        on_path[static_cast<std::size_t>(u)] = true;
        stack.push_back(std::move(f));
    };

    open(s, 0.0);
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next == f.children.size() || f.children[f.next].first >= incumbent) {
            on_path[static_cast<std::size_t>(f.node)] = false;
            stack.pop_back();
            if (!prefix_arcs.empty()) prefix_arcs.pop_back();
            continue;
        }
        const ArcId e = f.children[f.next++].second;
        const NodeId v = graph.arc(e).head;
        if (++sol.nodes_explored > limits.max_nodes)
            throw Error(ErrorCode::NodeBudgetExceeded,
                        "min-max search exceeded " + std::to_string(limits.max_nodes) + " nodes");
        prefix_arcs.push_back(e);
        if (v == t) {
            Path candidate(graph, prefix_arcs);
            const double value = oracle(candidate);
            if (value < incumbent) {
                incumbent = value;
                sol.path = std::move(candidate);
            }
            prefix_arcs.pop_back();
            continue;
        }
        open(v, f.prefix + bound_costs[static_cast<std::size_t>(e)]);
    }
    sol.robust_value = incumbent;
    sol.runtime_seconds = seconds_since(start);
    return sol;
}

RobustSolution solve_bruteforce(const Graph& graph, const PathOracle& oracle, NodeId s, NodeId t,
                                std::size_t path_limit) {
    const auto start = Clock::now();
    const auto paths = enumerate_simple_paths(graph, s, t, path_limit);
    if (paths.empty()) throw Error(ErrorCode::NoPath, "node " + std::to_string(t) + " unreachable from " + std::to_string(s));
    RobustSolution sol;
    sol.robust_value = std::numeric_limits<double>::infinity();
    for (const Path& p : paths) {
        const double value = oracle(p);
        if (value < sol.robust_value) {
            sol.robust_value = value;
            sol.path = p;
        }
    }
    sol.sp_calls = 1;  // the enumeration counts as one search
    sol.nodes_explored = paths.size();
    sol.runtime_seconds = seconds_since(start);
    return sol;
}

}  // namespace rsp

namespace rsp {

Algorithm parse_algorithm(std::string_view name) {
    if (name == "auto") return Algorithm::Auto;
    if (name == "naive") return Algorithm::Naive;
    if (name == "bb") return Algorithm::BranchAndBound;
    if (name == "minmax") return Algorithm::MinMax;
    if (name == "bruteforce") return Algorithm::BruteForce;
    throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

Method parse_method(std::string_view text) {
    if (text == "average" || text.starts_with("average:")) return std::nullopt;
    return parse_uncertainty_spec(text);
}

std::string method_name(const Method& method) {
    return method ? std::string(kind_name(method->kind, method->diagonal_only)) : std::string("average");
}

RobustSolution solve_robust(const Graph& graph, const Method& method, const ScenarioMatrix& scenarios,
                            const ScenarioStats& stats, NodeId s, NodeId t, const SolveOptions& options) {
    if (scenarios.cols() != graph.arc_count() || stats.arc_count() != graph.arc_count())
        throw Error(ErrorCode::DimensionMismatch, "scenario columns must match the graph's arcs");
    if (!method) {
        switch (options.algorithm) {
            case Algorithm::Auto: return solve_average(graph, stats.mean, s, t);
            case Algorithm::BruteForce: {
                const CostVector& mean = stats.mean;
                return solve_bruteforce(graph, [&](const Path& x) { return x.cost(mean); }, s, t, options.path_limit);
            }
            default: throw Error(ErrorCode::InvalidArgument, "the average case supports auto and bruteforce only");
        }
    }
    const UncertaintySpec& spec = *method;
    const PathOracle oracle = make_oracle(spec, scenarios, stats);
    const bool ellipsoid = spec.kind == SetKind::Ellipsoid;

    Algorithm algorithm = options.algorithm;
    if (algorithm == Algorithm::Auto) {
        switch (spec.kind) {
            case SetKind::Ellipsoid: algorithm = Algorithm::BranchAndBound; break;
            case SetKind::ConvexHull:
            case SetKind::Permutohull:
            case SetKind::SymPermutohull: algorithm = Algorithm::MinMax; break;
            default: break;
        }
    }

    RobustSolution sol;
    switch (algorithm) {
        case Algorithm::Auto:
            sol = spec.kind == SetKind::Interval ? solve_interval(graph, stats, spec.parameter, s, t)
                                                 : solve_budgeted(graph, stats, spec.parameter, s, t);
            break;
        case Algorithm::Naive:
        case Algorithm::BranchAndBound: {
            if (!ellipsoid) throw Error(ErrorCode::InvalidArgument, "naive and bb solve ellipsoidal sets only");
            const CostVector d = ellipsoid_weights(stats, spec.parameter);
            sol = algorithm == Algorithm::Naive ? solve_ellipsoid_naive(graph, stats.mean, d, s, t)
                                                : solve_ellipsoid_bb(graph, stats.mean, d, s, t, options.ellipsoid);
            break;
        }
        case Algorithm::MinMax:
            sol = solve_scenario_minmax(graph, oracle, minmax_bound_costs(spec, scenarios, stats), s, t,
                                        options.minmax);
            break;
        case Algorithm::BruteForce: sol = solve_bruteforce(graph, oracle, s, t, options.path_limit); break;
    }
    sol.robust_value = oracle(sol.path);
    return sol;
}

}  // namespace rsp
