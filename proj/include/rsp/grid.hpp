#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "rsp/graph.hpp"
#include "rsp/scenario.hpp"

namespace rsp {

enum class GridOrientation {
    RightDown,   // acyclic; arcs point right and down
    Bidirected,  // every neighbour pair joined in both directions
};

GridOrientation parse_orientation(std::string_view name);

/// k x k grid with node r*k + c. Each node emits its right arc, then its down arc (then left and
/// up when bidirected). Every arc is one mile long.
Graph grid_graph(int k, GridOrientation orientation = GridOrientation::RightDown);

struct GridInstance {
    int k = 0;
    GridOrientation orientation = GridOrientation::RightDown;
    std::uint64_t seed = 0;
    Graph graph;
    ScenarioMatrix scenarios;  // integer travel times drawn uniformly from 1..100
    NodeId source = 0;         // upper-left corner
    NodeId target = 0;         // lower-right corner
};

GridInstance generate_grid_instance(int k, std::size_t samples = 50, std::uint64_t seed = 0,
                                    GridOrientation orientation = GridOrientation::RightDown);

/// Synthetic timestamped travel times with a shared congestion factor per scenario, a regional
/// factor per grid quadrant and small independent noise. Rows are hourly from 2024-01-01 00:00.
ScenarioMatrix correlated_grid_scenarios(int k, std::size_t samples, std::uint64_t seed,
                                         GridOrientation orientation = GridOrientation::RightDown);

}  // namespace rsp
