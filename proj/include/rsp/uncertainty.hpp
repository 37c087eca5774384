#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsp/graph.hpp"
#include "rsp/scenario.hpp"

namespace rsp {

enum class SetKind { ConvexHull, Interval, Ellipsoid, Budgeted, Permutohull, SymPermutohull };

/// One uncertainty-set family with its scaling parameter: lambda for ConvexHull, Interval and
/// Ellipsoid, Gamma for Budgeted, and a 1-based weight-column index for the permutohulls.
struct UncertaintySpec {
    SetKind kind = SetKind::Interval;
    double parameter = 0.0;
    bool diagonal_only = true;  // Ellipsoid only

    /// Checks the parameter domain; with `scenario_count` > 0 also the column bound for permutohulls.
    void validate(std::size_t scenario_count = 0) const;
    std::size_t column() const { return static_cast<std::size_t>(parameter); }
};

/// Parses "kind:param", e.g. "ellipsoid:3.0", "ellipsoid-full:3.0", "budgeted:5", "permutohull:7".
UncertaintySpec parse_uncertainty_spec(std::string_view text);
std::string to_string(const UncertaintySpec& spec);
std::string_view kind_name(SetKind kind, bool diagonal_only = true);

/// Nonincreasing nonnegative weights summing to one.
class WeightColumn {
public:
    explicit WeightColumn(std::vector<double> q);

    std::size_t size() const noexcept { return q_.size(); }
    double operator[](std::size_t i) const { return q_[i]; }
    std::span<const double> values() const noexcept { return q_; }

private:
    std::vector<double> q_;
};

/// Column j (1-based) of Q_N: the first j entries are 1/j.
WeightColumn q_column(std::size_t n, std::size_t j);

/// Column j (1-based, j <= floor(N/2)+1) of the symmetric matrix: 2/N in the first j-1 rows,
/// 0 in the last j-1 rows, 1/N in between.
WeightColumn q_tilde_column(std::size_t n, std::size_t j);

/// Weight column selected by a permutohull spec for N scenarios.
WeightColumn weight_column(const UncertaintySpec& spec, std::size_t n);

double worst_case_interval(const ScenarioStats& stats, double lambda, const Path& path);
double worst_case_convex_hull(const ScenarioMatrix& scenarios, const CostVector& mean, double lambda,
                              const Path& path);
double worst_case_ellipsoid(const ScenarioStats& stats, double lambda, const Path& path, bool diagonal_only);
double worst_case_budgeted(const ScenarioStats& stats, double gamma, const Path& path);
/// Correctly rounded sum_i a_i * b_i, so the result does not depend on the order of the terms.
double exact_dot(std::span<const double> a, std::span<const double> b);

/// Serves both permutohull families; they differ only in q.
double worst_case_permutohull(const ScenarioMatrix& scenarios, const WeightColumn& q, const Path& path);

/// Worst-case cost of a fixed path.
using PathOracle = std::function<double(const Path&)>;

/// Oracle for `spec`. The returned callable refers to `scenarios` and `stats`, which must outlive it.
PathOracle make_oracle(const UncertaintySpec& spec, const ScenarioMatrix& scenarios, const ScenarioStats& stats);

}  // namespace rsp
