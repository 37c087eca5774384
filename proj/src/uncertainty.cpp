#include "rsp/uncertainty.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <string>

#include "rsp/error.hpp"

namespace rsp {

namespace {

struct KindName {
    std::string_view name;
    SetKind kind;
    bool diagonal_only;
};

constexpr KindName kKindNames[] = {
    {"convex-hull", SetKind::ConvexHull, true},   {"interval", SetKind::Interval, true},
    {"ellipsoid", SetKind::Ellipsoid, true},      {"ellipsoid-full", SetKind::Ellipsoid, false},
    {"budgeted", SetKind::Budgeted, true},        {"permutohull", SetKind::Permutohull, true},
    {"sym-permutohull", SetKind::SymPermutohull, true},
};

void check_arcs(const Path& path, std::size_t arc_count) {
    for (ArcId e : path.arcs())
        if (static_cast<std::size_t>(e) >= arc_count)
            throw Error(ErrorCode::DimensionMismatch, "path uses arc " + std::to_string(e) + " but costs cover " +
                                                          std::to_string(arc_count) + " arcs");
}

void check_nonnegative(double value, const char* what) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite and nonnegative");
}

}  // namespace

std::string_view kind_name(SetKind kind, bool diagonal_only) {
    for (const auto& k : kKindNames)
        if (k.kind == kind && (kind != SetKind::Ellipsoid || k.diagonal_only == diagonal_only)) return k.name;
    return "unknown";
}

void UncertaintySpec::validate(std::size_t scenario_count) const {
    switch (kind) {
        case SetKind::ConvexHull:
        case SetKind::Interval:
        case SetKind::Ellipsoid: check_nonnegative(parameter, "lambda"); break;
        case SetKind::Budgeted: check_nonnegative(parameter, "Gamma"); break;
        case SetKind::Permutohull:
        case SetKind::SymPermutohull: {
            if (!(parameter >= 1.0) || parameter != std::floor(parameter))
                throw Error(ErrorCode::IndexOutOfRange, "column index must be an integer >= 1");
            if (scenario_count > 0) {
                const std::size_t bound =
                    kind == SetKind::Permutohull ? scenario_count : scenario_count / 2 + 1;
                if (column() > bound)
                    throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(column()) + " exceeds " +
                                                                std::to_string(bound) + " for N=" +
                                                                std::to_string(scenario_count));
            }
            break;
        }
    }
}

UncertaintySpec parse_uncertainty_spec(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw Error(ErrorCode::ParseError, "uncertainty spec '" + std::string(text) + "' is not kind:param");
    const std::string_view name = text.substr(0, colon);
    const std::string_view value = text.substr(colon + 1);
    UncertaintySpec spec;
    bool known = false;
    for (const auto& k : kKindNames) {
        if (k.name == name) {
            spec.kind = k.kind;
            spec.diagonal_only = k.diagonal_only;
            known = true;
        }
    }
    if (!known) throw Error(ErrorCode::ParseError, "unknown uncertainty set '" + std::string(name) + "'");
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), spec.parameter);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw Error(ErrorCode::ParseError, "bad parameter '" + std::string(value) + "'");
    spec.validate();
    return spec;
}

std::string to_string(const UncertaintySpec& spec) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, spec.parameter);
    return std::string(kind_name(spec.kind, spec.diagonal_only)) + ":" + std::string(buf, ptr);
}

WeightColumn::WeightColumn(std::vector<double> q) : q_(std::move(q)) {
    if (q_.empty()) throw Error(ErrorCode::InvalidArgument, "weight column is empty");
    double sum = 0.0;
    for (std::size_t i = 0; i < q_.size(); ++i) {
        if (!(q_[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "weights must be nonnegative");
        if (i > 0 && q_[i] > q_[i - 1]) throw Error(ErrorCode::InvalidArgument, "weights must be nonincreasing");
        sum += q_[i];
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidArgument, "weights must sum to one");
}

WeightColumn q_column(std::size_t n, std::size_t j) {
    if (j < 1 || j > n)
        throw Error(ErrorCode::IndexOutOfRange, "column " + std::to_string(j) + " of Q_" + std::to_string(n));
    std::vector<double> q(n, 0.0);
    std::fill_n(q.begin(), j, 1.0 / static_cast<double>(j));
    return WeightColumn(std::move(q));
}

WeightColumn q_tilde_column(std::size_t n, std::size_t j) {
    if (n == 0 || j < 1 || j > n / 2 + 1)
        throw Error(ErrorCode::IndexOutOfRange,
                    "column " + std::to_string(j) + " of the symmetric matrix for N=" + std::to_string(n));
    const double unit = 1.0 / static_cast<double>(n);
    std::vector<double> q(n, unit);
    for (std::size_t i = 0; i + 1 < j; ++i) {
        q[i] = 2.0 * unit;
        q[n - 1 - i] = 0.0;
    }
    return WeightColumn(std::move(q));
}

WeightColumn weight_column(const UncertaintySpec& spec, std::size_t n) {
    spec.validate(n);
    switch (spec.kind) {
        case SetKind::Permutohull: return q_column(n, spec.column());
        case SetKind::SymPermutohull: return q_tilde_column(n, spec.column());
        default: throw Error(ErrorCode::InvalidArgument, "weight columns exist only for permutohull sets");
    }
}

double worst_case_interval(const ScenarioStats& stats, double lambda, const Path& path) {
    check_nonnegative(lambda, "lambda");
    check_arcs(path, stats.arc_count());
    double deviation = 0.0;
    for (ArcId e : path.arcs()) {
        const auto i = static_cast<std::size_t>(e);
        deviation += stats.upper[i] - stats.mean[i];
    }
    return path.cost(stats.mean) + lambda * deviation;
}

double worst_case_convex_hull(const ScenarioMatrix& scenarios, const CostVector& mean, double lambda,
                              const Path& path) {
    check_nonnegative(lambda, "lambda");
    if (scenarios.empty()) throw Error(ErrorCode::EmptyMatrix, "no scenarios");
    if (scenarios.cols() != mean.size()) throw Error(ErrorCode::DimensionMismatch, "mean does not match scenarios");
    check_arcs(path, mean.size());
    const double center = path.cost(mean);
    // a linear function over the scaled hull peaks at a scaled vertex; the vertex offset
    // center + lambda * delta_i is maximized by the largest delta_i for every lambda >= 0
    double top = 0.0;
    for (std::size_t i = 0; i < scenarios.rows(); ++i) top = std::max(top, path.cost(scenarios.row(i)) - center);
    return center + lambda * top;
}

double worst_case_ellipsoid(const ScenarioStats& stats, double lambda, const Path& path, bool diagonal_only) {
    check_nonnegative(lambda, "lambda");
    check_arcs(path, stats.arc_count());
    double spread = 0.0;
    if (diagonal_only) {
        spread = path.cost(stats.diag_variance);
    } else {
        if (!stats.covariance) throw Error(ErrorCode::MissingCovariance, "full covariance was not computed");
        const Eigen::MatrixXd& sigma = *stats.covariance;
        for (ArcId e : path.arcs())
            for (ArcId f : path.arcs()) spread += sigma(e, f);
        spread = std::max(spread, 0.0);
    }
    return path.cost(stats.mean) + std::sqrt(lambda * spread);
}

double worst_case_budgeted(const ScenarioStats& stats, double gamma, const Path& path) {
    check_nonnegative(gamma, "Gamma");
    check_arcs(path, stats.arc_count());
    std::vector<double> deviations;
    deviations.reserve(path.length());
    for (ArcId e : path.arcs()) {
        const auto i = static_cast<std::size_t>(e);
        deviations.push_back(stats.upper[i] - stats.mean[i]);
    }
    std::stable_sort(deviations.begin(), deviations.end(), std::greater<>());
    double extra = 0.0;
    double budget = gamma;
    for (double dev : deviations) {
        if (budget <= 0.0) break;
        extra += std::min(budget, 1.0) * dev;
        budget -= 1.0;
    }
    return path.cost(stats.mean) + extra;
}

double exact_dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product of unequal lengths");
    // each product splits exactly into p + e; the partial-sum list then holds the exact total
    std::vector<double> partials;
    auto add = [&partials](double x) {
        std::size_t i = 0;
        for (double y : partials) {
            if (std::abs(x) < std::abs(y)) std::swap(x, y);
            const double hi = x + y;
            const double lo = y - (hi - x);
            if (lo != 0.0) partials[i++] = lo;
            x = hi;
        }
        partials.resize(i);
        partials.push_back(x);
    };
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double p = a[k] * b[k];
        add(p);
        add(std::fma(a[k], b[k], -p));
    }
    if (partials.empty()) return 0.0;
    std::size_t n = partials.size() - 1;
    double hi = partials[n], lo = 0.0;
    while (n > 0) {
        const double x = hi;
        const double y = partials[--n];
        hi = x + y;
        lo = y - (hi - x);
        if (lo != 0.0) break;
    }
    // round half to even across the remaining partials
    if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
        const double y = lo * 2.0;
        const double x = hi + y;
        if (y == x - hi) hi = x;
    }
    return hi;
}

double worst_case_permutohull(const ScenarioMatrix& scenarios, const WeightColumn& q, const Path& path) {
    if (q.size() != scenarios.rows())
        throw Error(ErrorCode::DimensionMismatch, "weight column has " + std::to_string(q.size()) +
                                                      " entries for " + std::to_string(scenarios.rows()) +
                                                      " scenarios");
    check_arcs(path, scenarios.cols());
    std::vector<double> costs = scenarios.path_costs(path);
    // rearrangement: the largest weight goes to the largest scenario cost
    std::stable_sort(costs.begin(), costs.end(), std::greater<>());
    return exact_dot(q.values(), costs);
}

PathOracle make_oracle(const UncertaintySpec& spec, const ScenarioMatrix& scenarios, const ScenarioStats& stats) {
    spec.validate(scenarios.rows());
    const double p = spec.parameter;
    switch (spec.kind) {
        case SetKind::ConvexHull:
            return [&scenarios, &stats, p](const Path& x) { return worst_case_convex_hull(scenarios, stats.mean, p, x); };
        case SetKind::Interval: return [&stats, p](const Path& x) { return worst_case_interval(stats, p, x); };
        case SetKind::Ellipsoid: {
            const bool diagonal = spec.diagonal_only;
            if (!diagonal && !stats.covariance)
                throw Error(ErrorCode::MissingCovariance, "full covariance was not computed");
            return [&stats, p, diagonal](const Path& x) { return worst_case_ellipsoid(stats, p, x, diagonal); };
        }
        case SetKind::Budgeted: return [&stats, p](const Path& x) { return worst_case_budgeted(stats, p, x); };
        case SetKind::Permutohull:
        case SetKind::SymPermutohull:
            return [&scenarios, q = weight_column(spec, scenarios.rows())](const Path& x) {
                return worst_case_permutohull(scenarios, q, x);
            };
    }
    throw Error(ErrorCode::InvalidArgument, "unknown uncertainty set");
}

}  // namespace rsp
