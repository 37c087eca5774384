#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsp/graph.hpp"
#include "rsp/scenario.hpp"
#include "rsp/uncertainty.hpp"

namespace rsp {

struct RobustSolution {
    Path path;
    double robust_value = 0.0;  // minutes
    std::size_t sp_calls = 0;
    std::size_t nodes_explored = 0;
    double runtime_seconds = 0.0;
};

/// Image of a path in the (mean cost, variance) plane.
struct BicriteriaPoint {
    double z1 = 0.0;  // mean . x
    double z2 = 0.0;  // d . x
    Path path;

    double robust_value() const;
    double weighted(double alpha) const { return alpha * z1 + (1.0 - alpha) * z2; }
};

/// Half-plane alpha * z1 + (1 - alpha) * z2 >= value satisfied by every feasible path.
struct CutLine {
    double alpha = 0.0;
    double value = 0.0;
};

/// A sub-range [a, b] of the first axis still to explore between two known efficient points.
struct SearchInterval {
    double a = 0.0;
    double b = 0.0;
    BicriteriaPoint left;
    BicriteriaPoint right;
};

/// Direction rule for the weighted shortest path at the interval midpoint m.
enum class AlphaRule {
    /// Weighted-sum level lines run parallel to the parabola tangent at (m, (OBJ-m)^2).
    TangentParallel,
    /// alpha = 1/(1+2(OBJ-m)) used as the weight on the mean cost.
    AsPrinted,
};

struct EllipsoidTolerances {
    double improve = 1e-9;  // relative margin for strict improvement tests
    double width = 1e-9;    // relative floor on interval widths
    AlphaRule alpha_rule = AlphaRule::TangentParallel;
    std::size_t max_sp_calls = 1'000'000;
};

/// alpha_m = 1/(1+2(OBJ-m)), clamped into (0, 1).
double alpha_as_printed(double obj, double m);
/// Weight on the mean cost whose level lines have slope 2(m-OBJ).
double alpha_tangent(double obj, double m);

/// Per-run trace of the branch-and-bound, for tests and diagnostics.
struct EllipsoidTrace {
    std::vector<CutLine> cuts;
    /// Each accepted new point with the anchors of the interval it split.
    struct Split {
        BicriteriaPoint left, found, right;
    };
    std::vector<Split> splits;
};

RobustSolution solve_average(const Graph& graph, const CostVector& mean, NodeId s, NodeId t);

RobustSolution solve_interval(const Graph& graph, const ScenarioStats& stats, double lambda, NodeId s, NodeId t);

RobustSolution solve_budgeted(const Graph& graph, const ScenarioStats& stats, double gamma, NodeId s, NodeId t);

/// Enumerates efficient extreme points recursively and returns the best under mean.x + sqrt(d.x).
/// `d` is the variance vector already scaled by lambda.
RobustSolution solve_ellipsoid_naive(const Graph& graph, const CostVector& mean, const CostVector& d, NodeId s,
                                     NodeId t);

/// Branch-and-bound over first-axis intervals of the bicriteria plane; explores only where an
/// improvement over the incumbent is still possible.
RobustSolution solve_ellipsoid_bb(const Graph& graph, const CostVector& mean, const CostVector& d, NodeId s, NodeId t,
                                  const EllipsoidTolerances& tol = {}, EllipsoidTrace* trace = nullptr);

/// Scales the diagonal variances by lambda.
CostVector ellipsoid_weights(const ScenarioStats& stats, double lambda);

struct MinMaxLimits {
    std::size_t max_nodes = 2'000'000;
};

/// Exact min over paths of `oracle(path)` by depth-first branch-and-bound on path prefixes.
/// `bound_costs` must satisfy oracle(x) >= bound_costs . x for every path x.
RobustSolution solve_scenario_minmax(const Graph& graph, const PathOracle& oracle, const CostVector& bound_costs,
                                     NodeId s, NodeId t, const MinMaxLimits& limits = {});

/// Convex combination of the scenarios, sum_i w_i (mean + lambda (c^i - mean)).
CostVector scenario_bound_costs(const ScenarioMatrix& scenarios, const CostVector& mean,
                                std::span<const double> weights, double lambda = 1.0);

/// Lower-bound vector for `spec`: the mean for most sets, the q-weighted scenario average for permutohulls.
CostVector minmax_bound_costs(const UncertaintySpec& spec, const ScenarioMatrix& scenarios,
                              const ScenarioStats& stats);

RobustSolution solve_bruteforce(const Graph& graph, const PathOracle& oracle, NodeId s, NodeId t,
                                std::size_t path_limit);

enum class Algorithm { Auto, Naive, BranchAndBound, MinMax, BruteForce };

Algorithm parse_algorithm(std::string_view name);

struct SolveOptions {
    Algorithm algorithm = Algorithm::Auto;
    EllipsoidTolerances ellipsoid{};
    MinMaxLimits minmax{};
    std::size_t path_limit = 100'000;
};

/// A solution method: the average case (no set) or one uncertainty set.
using Method = std::optional<UncertaintySpec>;

/// "average" (optionally "average:<anything>") or any "kind:param" spec.
Method parse_method(std::string_view text);
std::string method_name(const Method& method);

/// Dispatches to the matching solver. Auto picks the reduction for intervals and budgets, the
/// branch-and-bound for ellipsoids (on the diagonal surrogate for the full-covariance variant) and
/// the min-max search for scenario-based sets. The returned robust_value is the set's worst-case
/// oracle re-evaluated on the returned path.
RobustSolution solve_robust(const Graph& graph, const Method& method, const ScenarioMatrix& scenarios,
                            const ScenarioStats& stats, NodeId s, NodeId t, const SolveOptions& options = {});

}  // namespace rsp
