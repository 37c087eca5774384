#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rsp {

using NodeId = std::int32_t;
using ArcId = std::int32_t;

struct Arc {
    ArcId id = 0;
    NodeId tail = 0;
    NodeId head = 0;
};

/// Immutable directed multigraph. Arc ids are dense (0..n-1), self-loops are rejected,
/// parallel arcs are allowed. Outgoing arc lists are sorted by arc id.
class Graph {
public:
    Graph() = default;
    Graph(NodeId node_count, std::vector<Arc> arcs, std::vector<double> lengths_miles = {});

    NodeId node_count() const noexcept { return node_count_; }
    std::size_t arc_count() const noexcept { return arcs_.size(); }
    const Arc& arc(ArcId id) const { return arcs_[static_cast<std::size_t>(id)]; }
    std::span<const Arc> arcs() const noexcept { return arcs_; }
    std::span<const ArcId> out_arcs(NodeId v) const;
    std::span<const ArcId> in_arcs(NodeId v) const;

    /// Per-arc length in miles; empty when the graph file carries no lengths.
    std::span<const double> lengths_miles() const noexcept { return lengths_; }
    bool has_lengths() const noexcept { return !lengths_.empty(); }

    bool valid_node(NodeId v) const noexcept { return v >= 0 && v < node_count_; }

private:
    NodeId node_count_ = 0;
    std::vector<Arc> arcs_;
    std::vector<double> lengths_;
    std::vector<std::size_t> out_offsets_;
    std::vector<ArcId> out_list_;
    std::vector<std::size_t> in_offsets_;
    std::vector<ArcId> in_list_;
};

/// Per-arc travel times in minutes. Every entry is finite and nonnegative.
class CostVector {
public:
    CostVector() = default;
    explicit CostVector(std::vector<double> values);
    CostVector(std::initializer_list<double> values) : CostVector(std::vector<double>(values)) {}
    CostVector(std::size_t n, double value);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t e) const { return values_[e]; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> values_;
};

/// Simple directed s-t path, stored as its arc sequence plus the derived node sequence.
class Path {
public:
    Path() = default;
    Path(const Graph& graph, std::vector<ArcId> arcs);

    NodeId source() const noexcept { return nodes_.front(); }
    NodeId target() const noexcept { return nodes_.back(); }
    std::span<const ArcId> arcs() const noexcept { return arcs_; }
    std::span<const NodeId> nodes() const noexcept { return nodes_; }
    std::size_t length() const noexcept { return arcs_.size(); }
    bool empty() const noexcept { return arcs_.empty(); }

    /// 0/1 arc incidence vector of length `arc_count`.
    std::vector<std::uint8_t> incidence(std::size_t arc_count) const;

    double cost(std::span<const double> costs) const;
    double cost(const CostVector& costs) const { return cost(costs.values()); }

    friend bool operator==(const Path& a, const Path& b) { return a.arcs_ == b.arcs_; }

private:
    std::vector<ArcId> arcs_;
    std::vector<NodeId> nodes_;
};

struct ShortestPathResult {
    Path path;
    double cost = 0.0;
};

struct LexPathResult {
    Path path;
    double primary_cost = 0.0;
    double secondary_cost = 0.0;
};

/// Dijkstra on nonnegative costs. Among equal-cost relaxations the lower arc id wins.
ShortestPathResult shortest_path(const Graph& graph, const CostVector& costs, NodeId s, NodeId t);

/// Minimizes (primary, secondary) lexicographically with exact pair comparison.
LexPathResult lexicographic_shortest_path(const Graph& graph, const CostVector& primary,
                                          const CostVector& secondary, NodeId s, NodeId t);

/// Distances from every node to `t` along directed arcs (infinity if `t` is unreachable).
std::vector<double> distances_to(const Graph& graph, const CostVector& costs, NodeId t);

/// All simple s-t paths in depth-first order (outgoing arcs by ascending id).
/// Throws LimitExceeded once more than `limit` paths are found.
std::vector<Path> enumerate_simple_paths(const Graph& graph, NodeId s, NodeId t, std::size_t limit);

/// True if `t` can be reached from `s`.
bool reachable(const Graph& graph, NodeId s, NodeId t);

Graph load_graph_json(const std::string& file);
Graph parse_graph_json(const std::string& text);
std::string graph_to_json(const Graph& graph);

}  // namespace rsp
