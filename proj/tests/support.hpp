// Shared fixtures and independent reference computations for the unit tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "rsp/graph.hpp"
#include "rsp/grid.hpp"

namespace rsp::test {

// s=0, b=1, t=2; arc 0 is the direct path P1, arcs 1 and 2 form P2 through b.
inline Graph diamond() { return Graph(3, {{0, 0, 2}, {1, 0, 1}, {2, 1, 2}}); }

// s=0, a=1, b=2, t=3 with arcs s-a, a-t, s-b, b-t.
inline Graph four_node_diamond() { return Graph(4, {{0, 0, 1}, {1, 1, 3}, {2, 0, 2}, {3, 2, 3}}); }

// Corner-to-corner paths of a right-down grid built from move strings rather than graph search.
inline std::vector<Path> grid_paths_by_moves(const Graph& g, int k) {
    std::string moves = std::string(static_cast<std::size_t>(k - 1), 'D') + std::string(static_cast<std::size_t>(k - 1), 'R');
    std::sort(moves.begin(), moves.end());
    std::vector<Path> out;
    do {
        std::vector<ArcId> arcs;
        NodeId v = 0;
        for (char m : moves) {
            const NodeId next = m == 'R' ? v + 1 : v + k;
            for (ArcId e : g.out_arcs(v))
                if (g.arc(e).head == next) arcs.push_back(e);
            v = next;
        }
        out.emplace_back(g, std::move(arcs));
    } while (std::next_permutation(moves.begin(), moves.end()));
    return out;
}

inline std::vector<double> random_costs(std::size_t n, std::mt19937_64& rng, double lo = 0.0, double hi = 10.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> c(n);
    for (double& v : c) v = u(rng);
    return c;
}

inline bool close(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace rsp::test
