#include "rsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "rsp/error.hpp"

namespace rsp {

namespace {

void build_csr(NodeId node_count, const std::vector<Arc>& arcs, bool outgoing,
               std::vector<std::size_t>& offsets, std::vector<ArcId>& list) {
    offsets.assign(static_cast<std::size_t>(node_count) + 1, 0);
    for (const Arc& a : arcs) ++offsets[static_cast<std::size_t>(outgoing ? a.tail : a.head) + 1];
    for (std::size_t v = 0; v < static_cast<std::size_t>(node_count); ++v) offsets[v + 1] += offsets[v];
    list.assign(arcs.size(), 0);
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    // arcs are stored by id, so each bucket ends up sorted by id
    for (const Arc& a : arcs) list[fill[static_cast<std::size_t>(outgoing ? a.tail : a.head)]++] = a.id;
}

void check_endpoints(const Graph& graph, NodeId s, NodeId t) {
    if (!graph.valid_node(s)) throw Error(ErrorCode::InvalidNode, "source " + std::to_string(s) + " out of range");
    if (!graph.valid_node(t)) throw Error(ErrorCode::InvalidNode, "target " + std::to_string(t) + " out of range");
    if (s == t) throw Error(ErrorCode::InvalidArgument, "source and target must differ");
}

void check_size(const Graph& graph, const CostVector& costs) {
    if (costs.size() != graph.arc_count())
        throw Error(ErrorCode::DimensionMismatch, "cost vector has " + std::to_string(costs.size()) +
                                                      " entries, graph has " + std::to_string(graph.arc_count()) +
                                                      " arcs");
}

struct PairLabel {
    double first = 0.0;
    double second = 0.0;
    friend bool operator<(const PairLabel& a, const PairLabel& b) {
        return a.first < b.first || (a.first == b.first && a.second < b.second);
    }
    friend bool operator==(const PairLabel&, const PairLabel&) = default;
    friend PairLabel operator+(const PairLabel& a, const PairLabel& b) {
        return {a.first + b.first, a.second + b.second};
    }
};

// Label-setting search from s that stops once t is settled. Returns the arc sequence or
// nullopt if t is unreachable. `arc_label(e)` supplies the nonnegative label of arc e.
template <class Label, class ArcLabel>
std::optional<std::vector<ArcId>> label_setting(const Graph& graph, NodeId s, NodeId t, ArcLabel arc_label,
                                                Label& out_label) {
    const auto n = static_cast<std::size_t>(graph.node_count());
    std::vector<Label> dist(n);
    std::vector<bool> reached(n, false), settled(n, false);
    std::vector<ArcId> pred(n, -1);

    using Entry = std::pair<Label, NodeId>;
    auto later = [](const Entry& a, const Entry& b) { return b < a; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(later)> heap(later);

    dist[static_cast<std::size_t>(s)] = Label{};
    reached[static_cast<std::size_t>(s)] = true;
    heap.emplace(Label{}, s);
    while (!heap.empty()) {
        auto [label, u] = heap.top();
        heap.pop();
        const auto ui = static_cast<std::size_t>(u);
        if (settled[ui] || dist[ui] < label) continue;
        settled[ui] = true;
        if (u == t) break;
        for (ArcId e : graph.out_arcs(u)) {
            const auto vi = static_cast<std::size_t>(graph.arc(e).head);
            if (settled[vi]) continue;
            const Label candidate = label + arc_label(e);
            if (!reached[vi] || candidate < dist[vi]) {
                reached[vi] = true;
                dist[vi] = candidate;
                pred[vi] = e;
                heap.emplace(candidate, graph.arc(e).head);
            } else if (candidate == dist[vi] && e < pred[vi]) {
                pred[vi] = e;
            }
        }
    }
    const auto ti = static_cast<std::size_t>(t);
    if (!settled[ti]) return std::nullopt;
    std::vector<ArcId> arcs;
    for (NodeId v = t; v != s;) {
        const ArcId e = pred[static_cast<std::size_t>(v)];
        arcs.push_back(e);
        v = graph.arc(e).tail;
    }
    std::reverse(arcs.begin(), arcs.end());
    out_label = dist[ti];
    return arcs;
}

}  // namespace

Graph::Graph(NodeId node_count, std::vector<Arc> arcs, std::vector<double> lengths_miles)
    : node_count_(node_count), arcs_(std::move(arcs)), lengths_(std::move(lengths_miles)) {
    if (node_count_ <= 0) throw Error(ErrorCode::InvalidGraph, "node count must be positive");
    std::vector<bool> seen(arcs_.size(), false);
    for (const Arc& a : arcs_) {
        if (a.id < 0 || static_cast<std::size_t>(a.id) >= arcs_.size() || seen[static_cast<std::size_t>(a.id)])
            throw Error(ErrorCode::InvalidGraph, "arc ids must be exactly 0..n-1, got " + std::to_string(a.id));
        seen[static_cast<std::size_t>(a.id)] = true;
        if (!valid_node(a.tail) || !valid_node(a.head))
            throw Error(ErrorCode::InvalidGraph, "arc " + std::to_string(a.id) + " has an endpoint out of range");
        if (a.tail == a.head) throw Error(ErrorCode::InvalidGraph, "arc " + std::to_string(a.id) + " is a self-loop");
    }
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) { return a.id < b.id; });
    if (!lengths_.empty()) {
        if (lengths_.size() != arcs_.size())
            throw Error(ErrorCode::InvalidGraph, "length list does not match arc count");
        for (double len : lengths_)
            if (!std::isfinite(len) || len <= 0.0) throw Error(ErrorCode::InvalidGraph, "arc lengths must be positive");
    }
    build_csr(node_count_, arcs_, true, out_offsets_, out_list_);
    build_csr(node_count_, arcs_, false, in_offsets_, in_list_);
}

std::span<const ArcId> Graph::out_arcs(NodeId v) const {
    const auto i = static_cast<std::size_t>(v);
    return std::span<const ArcId>(out_list_).subspan(out_offsets_[i], out_offsets_[i + 1] - out_offsets_[i]);
}

std::span<const ArcId> Graph::in_arcs(NodeId v) const {
    const auto i = static_cast<std::size_t>(v);
    return std::span<const ArcId>(in_list_).subspan(in_offsets_[i], in_offsets_[i + 1] - in_offsets_[i]);
}

CostVector::CostVector(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t e = 0; e < values_.size(); ++e) {
        if (!std::isfinite(values_[e]) || values_[e] < 0.0)
            throw Error(ErrorCode::InvalidCost,
                        "cost of arc " + std::to_string(e) + " must be finite and nonnegative");
    }
}

CostVector::CostVector(std::size_t n, double value) : CostVector(std::vector<double>(n, value)) {}

Path::Path(const Graph& graph, std::vector<ArcId> arcs) : arcs_(std::move(arcs)) {
    if (arcs_.empty()) throw Error(ErrorCode::InvalidArgument, "a path needs at least one arc");
    std::vector<bool> visited(static_cast<std::size_t>(graph.node_count()), false);
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
        const ArcId e = arcs_[k];
        if (e < 0 || static_cast<std::size_t>(e) >= graph.arc_count())
            throw Error(ErrorCode::InvalidArgument, "unknown arc " + std::to_string(e));
        const Arc& a = graph.arc(e);
        if (k == 0) {
            nodes_.push_back(a.tail);
            visited[static_cast<std::size_t>(a.tail)] = true;
        } else if (a.tail != nodes_.back()) {
            throw Error(ErrorCode::InvalidArgument, "arcs " + std::to_string(arcs_[k - 1]) + " and " +
                                                        std::to_string(e) + " are not incident");
        }
        if (visited[static_cast<std::size_t>(a.head)])
            throw Error(ErrorCode::InvalidArgument, "node " + std::to_string(a.head) + " repeats on path");
        visited[static_cast<std::size_t>(a.head)] = true;
        nodes_.push_back(a.head);
    }
}

std::vector<std::uint8_t> Path::incidence(std::size_t arc_count) const {
    std::vector<std::uint8_t> x(arc_count, 0);
    for (ArcId e : arcs_) x[static_cast<std::size_t>(e)] = 1;
    return x;
}

double Path::cost(std::span<const double> costs) const {
    double total = 0.0;
    for (ArcId e : arcs_) total += costs[static_cast<std::size_t>(e)];
    return total;
}

ShortestPathResult shortest_path(const Graph& graph, const CostVector& costs, NodeId s, NodeId t) {
    check_endpoints(graph, s, t);
    check_size(graph, costs);
    double total = 0.0;
    auto arcs = label_setting<double>(
        graph, s, t, [&](ArcId e) { return costs[static_cast<std::size_t>(e)]; }, total);
    if (!arcs) throw Error(ErrorCode::NoPath, "node " + std::to_string(t) + " unreachable from " + std::to_string(s));
    return {Path(graph, std::move(*arcs)), total};
}

LexPathResult lexicographic_shortest_path(const Graph& graph, const CostVector& primary,
                                          const CostVector& secondary, NodeId s, NodeId t) {
    check_endpoints(graph, s, t);
    check_size(graph, primary);
    check_size(graph, secondary);
    PairLabel total;
    auto arcs = label_setting<PairLabel>(
        graph, s, t,
        [&](ArcId e) {
            const auto i = static_cast<std::size_t>(e);
            return PairLabel{primary[i], secondary[i]};
        },
        total);
    if (!arcs) throw Error(ErrorCode::NoPath, "node " + std::to_string(t) + " unreachable from " + std::to_string(s));
    Path path(graph, std::move(*arcs));
    // report the sums along the path, not the label, so callers can compare them with path.cost()
    return {path, path.cost(primary), path.cost(secondary)};
}

std::vector<double> distances_to(const Graph& graph, const CostVector& costs, NodeId t) {
    if (!graph.valid_node(t)) throw Error(ErrorCode::InvalidNode, "target " + std::to_string(t) + " out of range");
    check_size(graph, costs);
    const auto n = static_cast<std::size_t>(graph.node_count());
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    using Entry = std::pair<double, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[static_cast<std::size_t>(t)] = 0.0;
    heap.emplace(0.0, t);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[static_cast<std::size_t>(v)]) continue;
        for (ArcId e : graph.in_arcs(v)) {
            const NodeId u = graph.arc(e).tail;
            const double candidate = d + costs[static_cast<std::size_t>(e)];
            if (candidate < dist[static_cast<std::size_t>(u)]) {
                dist[static_cast<std::size_t>(u)] = candidate;
                heap.emplace(candidate, u);
            }
        }
    }
    return dist;
}

std::vector<Path> enumerate_simple_paths(const Graph& graph, NodeId s, NodeId t, std::size_t limit) {
    check_endpoints(graph, s, t);
    if (limit == 0) throw Error(ErrorCode::InvalidArgument, "path limit must be positive");
    std::vector<Path> paths;
    std::vector<bool> on_stack(static_cast<std::size_t>(graph.node_count()), false);
    std::vector<ArcId> prefix;

    // explicit stack of (node, next out-arc position) keeps deep graphs off the call stack
    std::vector<std::pair<NodeId, std::size_t>> stack{{s, 0}};
    on_stack[static_cast<std::size_t>(s)] = true;
    while (!stack.empty()) {
        auto& [u, pos] = stack.back();
        const auto out = graph.out_arcs(u);
        if (pos == out.size()) {
            on_stack[static_cast<std::size_t>(u)] = false;
            stack.pop_back();
            if (!prefix.empty()) prefix.pop_back();
            continue;
        }
        const ArcId e = out[pos++];
        const NodeId v = graph.arc(e).head;
        if (on_stack[static_cast<std::size_t>(v)]) continue;
        prefix.push_back(e);
        if (v == t) {
            if (paths.size() == limit)
                throw Error(ErrorCode::LimitExceeded, "more than " + std::to_string(limit) + " simple paths");
            paths.emplace_back(graph, prefix);
            prefix.pop_back();
            continue;
        }
        on_stack[static_cast<std::size_t>(v)] = true;
        stack.emplace_back(v, 0);
    }
    return paths;
}

bool reachable(const Graph& graph, NodeId s, NodeId t) {
    if (!graph.valid_node(s) || !graph.valid_node(t)) throw Error(ErrorCode::InvalidNode, "node out of range");
    std::vector<bool> seen(static_cast<std::size_t>(graph.node_count()), false);
    std::vector<NodeId> frontier{s};
    seen[static_cast<std::size_t>(s)] = true;
    while (!frontier.empty()) {
        const NodeId u = frontier.back();
        frontier.pop_back();
        if (u == t) return true;
        for (ArcId e : graph.out_arcs(u)) {
            const NodeId v = graph.arc(e).head;
            if (!seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = true;
                frontier.push_back(v);
            }
        }
    }
    return false;
}

}  // namespace rsp
