#include "rsp/grid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <string>

#include "rsp/error.hpp"

namespace rsp {

namespace {

void check_side(int k) {
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "grid side must be at least 2, got " + std::to_string(k));
}

}  // namespace

GridOrientation parse_orientation(std::string_view name) {
    if (name == "right-down") return GridOrientation::RightDown;
    if (name == "bidirected") return GridOrientation::Bidirected;
    throw Error(ErrorCode::InvalidArgument, "unknown grid orientation '" + std::string(name) + "'");
}

Graph grid_graph(int k, GridOrientation orientation) {
    check_side(k);
    std::vector<Arc> arcs;
    auto add = [&](NodeId u, NodeId v) { arcs.push_back({static_cast<ArcId>(arcs.size()), u, v}); };
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            const NodeId v = r * k + c;
            if (c + 1 < k) add(v, v + 1);
            if (r + 1 < k) add(v, v + k);
            if (orientation == GridOrientation::Bidirected) {
                if (c > 0) add(v, v - 1);
                if (r > 0) add(v, v - k);
            }
        }
    }
    std::vector<double> lengths(arcs.size(), 1.0);
    return Graph(k * k, std::move(arcs), std::move(lengths));
}

GridInstance generate_grid_instance(int k, std::size_t samples, std::uint64_t seed, GridOrientation orientation) {
    if (samples == 0) throw Error(ErrorCode::InvalidArgument, "need at least one scenario");
    GridInstance inst;
    inst.k = k;
    inst.orientation = orientation;
    inst.seed = seed;
    inst.graph = grid_graph(k, orientation);
    inst.source = 0;
    inst.target = k * k - 1;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> cost(1, 100);
    const std::size_t arcs = inst.graph.arc_count();
    std::vector<double> values(samples * arcs);
    for (double& v : values) v = cost(rng);
    inst.scenarios = ScenarioMatrix(samples, arcs, std::move(values));
    return inst;
}

ScenarioMatrix correlated_grid_scenarios(int k, std::size_t samples, std::uint64_t seed,
                                         GridOrientation orientation) {
    const Graph graph = grid_graph(k, orientation);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> base_draw(5.0, 30.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    const std::size_t arcs = graph.arc_count();
    std::vector<double> base(arcs);
    for (double& b : base) b = base_draw(rng);
    std::vector<int> quadrant(arcs);
    for (const Arc& a : graph.arcs()) {
        const int r = a.tail / k, c = a.tail % k;
        quadrant[static_cast<std::size_t>(a.id)] = (r < k / 2 ? 0 : 2) + (c < k / 2 ? 0 : 1);
    }

    std::vector<double> values(samples * arcs);
    std::vector<Timestamp> stamps(samples);
    const Timestamp start = std::chrono::sys_days{std::chrono::year{2024} / 1 / 1};
    for (std::size_t i = 0; i < samples; ++i) {
        stamps[i] = start + std::chrono::hours(static_cast<long>(i));
        const double congestion = 1.0 + 0.5 * std::abs(normal(rng));
        double regional[4];
        for (double& q : regional) q = std::max(0.5, 1.0 + 0.3 * normal(rng));
        for (std::size_t e = 0; e < arcs; ++e) {
            const double noise = std::max(0.5, 1.0 + 0.1 * normal(rng));
            values[i * arcs + e] = base[e] * congestion * regional[quadrant[e]] * noise;
        }
    }
    return ScenarioMatrix(samples, arcs, std::move(values), std::move(stamps));
}

}  // namespace rsp
