// Exact solvers for min mean.x + sqrt(d.x) over s-t paths via the bicriteria plane
// z = (mean.x, d.x). Every optimum is attained at an efficient extreme point, so both
// solvers only ever query weighted-sum shortest paths.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <string>

#include "rsp/error.hpp"
#include "rsp/solvers.hpp"

namespace rsp {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kAlphaFloor = 1e-12;

void check_inputs(const Graph& graph, const CostVector& mean, const CostVector& d) {
    if (mean.size() != graph.arc_count() || d.size() != graph.arc_count())
        throw Error(ErrorCode::DimensionMismatch, "mean and variance vectors must cover every arc");
}

BicriteriaPoint make_point(Path path, const CostVector& mean, const CostVector& d) {
    BicriteriaPoint p;
    p.z1 = path.cost(mean);
    p.z2 = path.cost(d);
    p.path = std::move(path);
    return p;
}

bool same_point(const BicriteriaPoint& a, const BicriteriaPoint& b) { return a.z1 == b.z1 && a.z2 == b.z2; }

BicriteriaPoint weighted_path(const Graph& graph, const CostVector& mean, const CostVector& d, double alpha,
                              NodeId s, NodeId t) {
    std::vector<double> w(mean.size());
    for (std::size_t e = 0; e < w.size(); ++e) w[e] = alpha * mean[e] + (1.0 - alpha) * d[e];
    return make_point(shortest_path(graph, CostVector(std::move(w)), s, t).path, mean, d);
}

double relative(double tol, double magnitude) { return tol * std::max(1.0, std::abs(magnitude)); }

// Line z2 = offset + slope * z1.
struct Line {
    double offset;
    double slope;
    double at(double z1) const { return offset + slope * z1; }
};

// Region of the bicriteria plane where an undiscovered extreme point could still improve the
// incumbent, restricted to the triangle spanned by two anchors.
class Region {
public:
    Region(const BicriteriaPoint& left, const BicriteriaPoint& right, double obj, const std::vector<CutLine>& cuts,
           const EllipsoidTolerances& tol)
        : obj_(obj - relative(tol.improve, obj)) {
        const double slope = (right.z2 - left.z2) / (right.z1 - left.z1);
        // points on the segment itself are never better than its endpoints (the objective is concave)
        segment_ = {left.z2 - slope * left.z1 - relative(tol.improve, left.z2), slope};
        lower_.push_back({right.z2, 0.0});
        for (const CutLine& c : cuts) lower_.push_back({c.value / (1.0 - c.alpha), -c.alpha / (1.0 - c.alpha)});
    }

    /// Open sub-intervals of [a, b] whose vertical slice is nonempty.
    std::vector<std::pair<double, double>> components(double a, double b) const {
        const double hi = std::min(b, obj_);
        std::vector<std::pair<double, double>> out;
        if (!(hi > a)) return out;
        std::vector<double> marks{a, hi};
        auto keep = [&](double z) {
            if (std::isfinite(z) && z > a && z < hi) marks.push_back(z);
        };
        for (const Line& l : lower_) {
            if (l.slope != segment_.slope) keep((l.offset - segment_.offset) / (segment_.slope - l.slope));
            parabola_roots(l, keep);
        }
        parabola_roots(segment_, keep);
        std::sort(marks.begin(), marks.end());
        for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
            const double u = marks[k], w = marks[k + 1];
            if (!(w > u) || !open_at(0.5 * (u + w))) continue;
            if (!out.empty() && out.back().second == u)
                out.back().second = w;
            else
                out.emplace_back(u, w);
        }
        return out;
    }

private:
    bool open_at(double z1) const {
        if (z1 >= obj_) return false;
        double floor = lower_.front().at(z1);
        for (const Line& l : lower_) floor = std::max(floor, l.at(z1));
        const double ceiling = std::min(segment_.at(z1), (obj_ - z1) * (obj_ - z1));
        return floor < ceiling;
    }

    // (obj - z)^2 = offset + slope * z
    template <class Sink>
    void parabola_roots(const Line& l, Sink&& sink) const {
        const double b = 2.0 * obj_ + l.slope;
        const double disc = b * b - 4.0 * (obj_ * obj_ - l.offset);
        if (disc < 0.0) return;
        const double r = std::sqrt(disc);
        sink(0.5 * (b - r));
        sink(0.5 * (b + r));
    }

    double obj_;
    Line segment_{};
    std::vector<Line> lower_;
};

bool strictly_inside(const BicriteriaPoint& p, const BicriteriaPoint& left, const BicriteriaPoint& right,
                     const EllipsoidTolerances& tol) {
    if (!(p.z1 > left.z1 && p.z1 < right.z1)) return false;
    const double seg = left.z2 + (p.z1 - left.z1) * (right.z2 - left.z2) / (right.z1 - left.z1);
    return p.z2 < seg - relative(tol.improve, seg);
}

}  // namespace

double BicriteriaPoint::robust_value() const { return z1 + std::sqrt(std::max(z2, 0.0)); }

double alpha_as_printed(double obj, double m) {
    return std::clamp(1.0 / (1.0 + 2.0 * (obj - m)), kAlphaFloor, 1.0 - kAlphaFloor);
}

double alpha_tangent(double obj, double m) {
    const double slope = 2.0 * (obj - m);
    return std::clamp(slope / (1.0 + slope), kAlphaFloor, 1.0 - kAlphaFloor);
}

RobustSolution solve_ellipsoid_naive(const Graph& graph, const CostVector& mean, const CostVector& d, NodeId s,
                                     NodeId t) {
    check_inputs(graph, mean, d);
    const auto start = Clock::now();
    RobustSolution sol;
    std::vector<BicriteriaPoint> found;
    found.push_back(make_point(lexicographic_shortest_path(graph, mean, d, s, t).path, mean, d));
    found.push_back(make_point(lexicographic_shortest_path(graph, d, mean, s, t).path, mean, d));
    sol.sp_calls = 2;

    // explicit stack of (x0, x1) index pairs replaces the recursive EXPLORE
    std::vector<std::pair<std::size_t, std::size_t>> pending;
    if (!same_point(found[0], found[1])) pending.emplace_back(0, 1);
    while (!pending.empty()) {
        const auto [i0, i1] = pending.back();
        pending.pop_back();
        const double dc = found[i1].z1 - found[i0].z1;
        const double dd = found[i0].z2 - found[i1].z2;
        if (!(dc > 0.0 && dd > 0.0)) continue;
        const double alpha = dd / (dc + dd);
        BicriteriaPoint x = weighted_path(graph, mean, d, alpha, s, t);
        ++sol.sp_calls;
        const double anchor = found[i0].weighted(alpha);
        if (x.weighted(alpha) < anchor - relative(1e-9, anchor)) {
            found.push_back(std::move(x));
            const std::size_t k = found.size() - 1;
            pending.emplace_back(k, i1);
            pending.emplace_back(i0, k);
        }
    }
    const auto best = std::min_element(found.begin(), found.end(), [](const auto& a, const auto& b) {
        return a.robust_value() < b.robust_value();
    });
    sol.robust_value = best->robust_value();
    sol.path = best->path;
    sol.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return sol;
}

RobustSolution solve_ellipsoid_bb(const Graph& graph, const CostVector& mean, const CostVector& d, NodeId s, NodeId t,
                                  const EllipsoidTolerances& tol, EllipsoidTrace* trace) {
    check_inputs(graph, mean, d);
    const auto start = Clock::now();
    RobustSolution sol;
    BicriteriaPoint left = make_point(lexicographic_shortest_path(graph, mean, d, s, t).path, mean, d);
    BicriteriaPoint right = make_point(lexicographic_shortest_path(graph, d, mean, s, t).path, mean, d);
    sol.sp_calls = 2;

    BicriteriaPoint best = left.robust_value() <= right.robust_value() ? left : right;
    double obj = best.robust_value();
    const double width_floor = relative(tol.width, right.z1);
    std::vector<CutLine> cuts;

    std::deque<SearchInterval> open;
    if (!same_point(left, right) && right.z1 > left.z1) open.push_back({left.z1, right.z1, left, right});

    while (!open.empty()) {
        SearchInterval current = std::move(open.front());
        open.pop_front();
        auto parts = Region(current.left, current.right, obj, cuts, tol).components(current.a, current.b);
        std::erase_if(parts, [&](const auto& p) { return p.second - p.first < width_floor; });
        if (parts.empty()) continue;
        for (std::size_t k = 1; k < parts.size(); ++k)
            open.push_back({parts[k].first, parts[k].second, current.left, current.right});
        current.a = parts.front().first;
        current.b = parts.front().second;

        const double m = 0.5 * (current.a + current.b);
        const double alpha =
            tol.alpha_rule == AlphaRule::TangentParallel ? alpha_tangent(obj, m) : alpha_as_printed(obj, m);
        if (sol.sp_calls >= tol.max_sp_calls)
            throw Error(ErrorCode::LimitExceeded, "ellipsoid search exceeded " + std::to_string(tol.max_sp_calls) +
                                                      " shortest-path calls");
        BicriteriaPoint found = weighted_path(graph, mean, d, alpha, s, t);
        ++sol.sp_calls;

        // shave the bound slightly so rounding in the path sums never cuts off a feasible point
        const double v = found.weighted(alpha);
        cuts.push_back({alpha, v - relative(1e-12, v)});
        if (trace) trace->cuts.push_back(cuts.back());

        bool progress = false;
        if (found.robust_value() < obj) {
            obj = found.robust_value();
            best = found;
            progress = true;
        }

        if (strictly_inside(found, current.left, current.right, tol)) {
            progress = true;
        } else if (!progress) {
            double remaining = 0.0;
            for (const auto& [a, b] : Region(current.left, current.right, obj, cuts, tol).components(current.a, current.b))
                remaining += b - a;
            if (remaining > (current.b - current.a) - width_floor) {
                // the cut missed this interval; bisect so widths keep shrinking toward the floor
                open.push_back({current.a, m, current.left, current.right});
                current.a = m;
            }
        }
        open.push_back(std::move(current));

        // the new point may split any triangle it falls into, not only the one it was searched from
        const std::size_t count = open.size();
        for (std::size_t k = 0; k < count; ++k) {
            SearchInterval iv = open.front();
            open.pop_front();
            if (!strictly_inside(found, iv.left, iv.right, tol)) {
                open.push_back(std::move(iv));
                continue;
            }
            if (trace) trace->splits.push_back({iv.left, found, iv.right});
            if (iv.a < found.z1) open.push_back({iv.a, std::min(iv.b, found.z1), iv.left, found});
            if (iv.b > found.z1) open.push_back({std::max(iv.a, found.z1), iv.b, found, iv.right});
        }
    }

    sol.robust_value = obj;
    sol.path = std::move(best.path);
    sol.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return sol;
}

}  // namespace rsp
