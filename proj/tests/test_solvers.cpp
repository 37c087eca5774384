#include <doctest.h>

#include <random>

#include "rsp/error.hpp"
#include "rsp/grid.hpp"
#include "rsp/solvers.hpp"
#include "support.hpp"

using namespace rsp;
using test::close;

namespace {

// P1 = arc 0 (mean 10, variance 0, deviation 0); P2 = arcs 1, 2 (means 5 and 3, variances 4 and 5,
// deviations 4 and 2).
ScenarioStats diamond_stats() {
    return {CostVector{10.0, 5.0, 3.0}, CostVector{10.0, 5.0, 3.0}, CostVector{10.0, 9.0, 5.0},
            CostVector{0.0, 4.0, 5.0}, std::nullopt};
}

ScenarioMatrix random_scenarios(const Graph& g, std::size_t n, std::mt19937_64& rng) {
    std::vector<std::vector<double>> rows;
    std::uniform_int_distribution<int> cost(1, 100);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> r(g.arc_count());
        for (double& v : r) v = cost(rng);
        rows.push_back(r);
    }
    return ScenarioMatrix(rows);
}

double best_by_enumeration(const std::vector<Path>& paths, const PathOracle& oracle) {
    double best = 1e300;
    for (const Path& p : paths) best = std::min(best, oracle(p));
    return best;
}

}  // namespace

TEST_CASE("average case") {
    const Graph line(3, {{0, 0, 1}, {1, 1, 2}});
    const auto sol = solve_average(line, CostVector{2.0, 3.0}, 0, 2);
    CHECK(sol.path == Path(line, {0, 1}));
    CHECK(sol.robust_value == 5.0);
    CHECK(sol.sp_calls == 1);
    CHECK(solve_average(grid_graph(3), CostVector(12, 0.0), 0, 8).robust_value == 0.0);

    std::mt19937_64 rng(1);
    const Graph g = grid_graph(5);
    for (int i = 0; i < 100; ++i) {
        const CostVector c(test::random_costs(g.arc_count(), rng));
        const auto sp = shortest_path(g, c, 0, 24);
        const auto avg = solve_average(g, c, 0, 24);
        CHECK(avg.path == sp.path);
        CHECK(avg.robust_value == sp.cost);
    }
}

TEST_CASE("interval sets") {
    const Graph g = test::diamond();
    const auto st = diamond_stats();
    CHECK(solve_interval(g, st, 0.0, 0, 2).path == solve_average(g, st.mean, 0, 2).path);
    CHECK(solve_average(g, st.mean, 0, 2).path == Path(g, {1, 2}));
    const auto sol = solve_interval(g, st, 1.0, 0, 2);
    CHECK(sol.path == Path(g, {0}));
    CHECK(sol.robust_value == 10.0);
    CHECK_THROWS_AS(solve_interval(g, st, -1.0, 0, 2), Error);

    std::mt19937_64 rng(2);
    const Graph grid = grid_graph(4);
    const auto paths = test::grid_paths_by_moves(grid, 4);
    for (int i = 0; i < 50; ++i) {
        const auto m = random_scenarios(grid, 10, rng);
        const auto s = compute_stats(m, false);
        for (double lambda : {0.25, 1.0}) {
            const auto r = solve_interval(grid, s, lambda, 0, 15);
            CHECK(r.robust_value == doctest::Approx(worst_case_interval(s, lambda, r.path)).epsilon(1e-12));
            CHECK(close(r.robust_value,
                        best_by_enumeration(paths, [&](const Path& p) { return worst_case_interval(s, lambda, p); })));
        }
    }
}

TEST_CASE("budgeted sets") {
    const Graph g = test::diamond();
    const auto st = diamond_stats();
    const auto zero = solve_budgeted(g, st, 0.0, 0, 2);
    CHECK(zero.path == solve_average(g, st.mean, 0, 2).path);
    CHECK(zero.robust_value == 8.0);
    const auto one = solve_budgeted(g, st, 1.0, 0, 2);
    CHECK(one.path == Path(g, {0}));
    CHECK(one.robust_value == 10.0);
    CHECK(worst_case_budgeted(st, 1.0, Path(g, {1, 2})) == 12.0);

    std::mt19937_64 rng(3);
    const Graph grid = grid_graph(4);
    for (int i = 0; i < 30; ++i) {
        const auto s = compute_stats(random_scenarios(grid, 8, rng), false);
        // every path has 6 arcs, so a budget of 6 never binds
        const auto full = solve_budgeted(grid, s, 6.0, 0, 15);
        CHECK(close(full.robust_value, solve_interval(grid, s, 1.0, 0, 15).robust_value));
        CHECK(full.robust_value == worst_case_budgeted(s, 6.0, full.path));
    }
}

TEST_CASE("ellipsoid direction rules") {
    CHECK(alpha_as_printed(3.0, 1.0) == doctest::Approx(0.2));
    CHECK(alpha_tangent(3.0, 1.0) == doctest::Approx(0.8));
    // level lines of the tangent rule have slope -alpha/(1-alpha) = 2(m - OBJ)
    const double a = alpha_tangent(2.5, 1.1464);
    CHECK(-a / (1 - a) == doctest::Approx(2 * (1.1464 - 2.5)));
    CHECK(alpha_tangent(1.0, 1.0) > 0.0);
    CHECK(alpha_as_printed(1.0, 1.0) < 1.0);
}

TEST_CASE("ellipsoid solvers on the diamond") {
    const Graph g = test::diamond();
    const auto st = diamond_stats();
    const CostVector d = ellipsoid_weights(st, 1.0);
    for (const auto& sol : {solve_ellipsoid_naive(g, st.mean, d, 0, 2), solve_ellipsoid_bb(g, st.mean, d, 0, 2)}) {
        CHECK(sol.path == Path(g, {0}));
        CHECK(sol.robust_value == 10.0);
    }
    CHECK(solve_average(g, st.mean, 0, 2).path == Path(g, {1, 2}));

    const Graph line(3, {{0, 0, 1}, {1, 1, 2}});
    const auto unique = solve_ellipsoid_naive(line, CostVector{1.0, 2.0}, CostVector{4.0, 5.0}, 0, 2);
    CHECK(unique.sp_calls == 2);
    CHECK(unique.robust_value == 6.0);
    CHECK(solve_ellipsoid_bb(line, CostVector{1.0, 2.0}, CostVector{4.0, 5.0}, 0, 2).sp_calls == 2);
}

TEST_CASE("ellipsoid solvers match enumeration on random grids") {
    std::mt19937_64 rng(4);
    for (auto orientation : {GridOrientation::RightDown, GridOrientation::Bidirected}) {
        const Graph g = grid_graph(4, orientation);
        const auto paths = enumerate_simple_paths(g, 0, 15, 100000);
        for (int i = 0; i < 60; ++i) {
            const auto m = random_scenarios(g, 20, rng);
            const auto st = compute_stats(m, false);
            for (double lambda : {0.5, 1.0, 10.0}) {
                const CostVector d = ellipsoid_weights(st, lambda);
                const double best = best_by_enumeration(paths, [&](const Path& p) { return worst_case_ellipsoid(st, lambda, p, true); });
                EllipsoidTrace trace;
                const auto bb = solve_ellipsoid_bb(g, st.mean, d, 0, 15, {}, &trace);
                const auto naive = solve_ellipsoid_naive(g, st.mean, d, 0, 15);
                CHECK(close(bb.robust_value, best));
                CHECK(close(naive.robust_value, best));
                CHECK(close(bb.robust_value, worst_case_ellipsoid(st, lambda, bb.path, true)));
                // every cut is satisfied by every path
                for (const CutLine& c : trace.cuts)
                    for (const Path& p : paths)
                        CHECK(c.alpha * p.cost(st.mean) + (1 - c.alpha) * p.cost(d) >= c.value);
            }
        }
    }
}

TEST_CASE("property: accepted points sit below their segment and cuts are tight") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 40; ++i) {
        const auto inst = generate_grid_instance(8, 50, 100 + static_cast<std::uint64_t>(i));
        const auto st = compute_stats(inst.scenarios, false);
        const CostVector d = ellipsoid_weights(st, 1.0 + i % 5);
        EllipsoidTrace trace;
        solve_ellipsoid_bb(inst.graph, st.mean, d, inst.source, inst.target, {}, &trace);
        for (const auto& split : trace.splits) {
            const auto& [l, x, r] = split;
            CHECK(x.z1 > l.z1);
            CHECK(x.z1 < r.z1);
            const double seg = l.z2 + (x.z1 - l.z1) * (r.z2 - l.z2) / (r.z1 - l.z1);
            CHECK(x.z2 < seg);
        }
        for (const CutLine& c : trace.cuts) {
            std::vector<double> w(st.mean.size());
            for (std::size_t e = 0; e < w.size(); ++e) w[e] = c.alpha * st.mean[e] + (1 - c.alpha) * d[e];
            CHECK(shortest_path(inst.graph, CostVector(w), inst.source, inst.target).cost >= c.value - 1e-12 * std::max(1.0, c.value));
        }
    }
}

TEST_CASE("property: scaling mean and variance together keeps the solver exact") {
    std::mt19937_64 rng(13);
    const Graph g = grid_graph(4);
    const auto paths = test::grid_paths_by_moves(g, 4);
    for (int i = 0; i < 30; ++i) {
        const auto base_mean = test::random_costs(g.arc_count(), rng, 1.0, 100.0);
        const auto base_d = test::random_costs(g.arc_count(), rng, 0.0, 900.0);
        for (double k : {0.01, 1.0, 37.0}) {
            std::vector<double> mean = base_mean, d = base_d;
            for (double& v : mean) v *= k;
            for (double& v : d) v *= k;
            const CostVector cm(mean), cd(d);
            const auto sol = solve_ellipsoid_bb(g, cm, cd, 0, 15);
            const double best = best_by_enumeration(paths, [&](const Path& p) { return p.cost(cm) + std::sqrt(p.cost(cd)); });
            CHECK(close(sol.path.cost(cm) + std::sqrt(sol.path.cost(cd)), best));
        }
    }
}

TEST_CASE("the printed direction rule is sound but may run out of calls") {
    EllipsoidTolerances tol;
    tol.alpha_rule = AlphaRule::AsPrinted;
    tol.max_sp_calls = 2000;
    // its cuts all pass through the incumbent and stay under the improvement parabola, so the
    // region only closes by bisection; even the diamond exhausts the budget
    const Graph diamond = test::diamond();
    const auto st = diamond_stats();
    EllipsoidTrace trace;
    try {
        solve_ellipsoid_bb(diamond, st.mean, ellipsoid_weights(st, 1.0), 0, 2, tol, &trace);
        FAIL("expected LimitExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LimitExceeded);
    }
    for (const CutLine& c : trace.cuts) CHECK(c.alpha * 10.0 <= c.value * (1 + 1e-9));

    std::mt19937_64 rng(5);
    const Graph g = grid_graph(4);
    const auto paths = test::grid_paths_by_moves(g, 4);
    for (int i = 0; i < 20; ++i) {
        const CostVector mean(test::random_costs(g.arc_count(), rng, 0.0, 0.3));
        const CostVector d(test::random_costs(g.arc_count(), rng, 0.0, 0.3));
        const double best = best_by_enumeration(paths, [&](const Path& p) { return p.cost(mean) + std::sqrt(p.cost(d)); });
        std::optional<double> value;
        try {
            value = solve_ellipsoid_bb(g, mean, d, 0, 15, tol).robust_value;
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::LimitExceeded);
        }
        if (value) CHECK(close(*value, best));
    }
}

TEST_CASE("branch-and-bound needs fewer shortest paths than full enumeration") {
    double bb_calls = 0, naive_calls = 0;
    for (int size : {5, 10}) {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto inst = generate_grid_instance(size, 50, seed);
            const auto st = compute_stats(inst.scenarios, false);
            const CostVector d = ellipsoid_weights(st, 1.0);
            const auto bb = solve_ellipsoid_bb(inst.graph, st.mean, d, inst.source, inst.target);
            const auto naive = solve_ellipsoid_naive(inst.graph, st.mean, d, inst.source, inst.target);
            CHECK(close(bb.robust_value, naive.robust_value));
            bb_calls += static_cast<double>(bb.sp_calls);
            naive_calls += static_cast<double>(naive.sp_calls);
        }
    }
    CHECK(bb_calls <= naive_calls);
}

TEST_CASE("shortest-path call limit") {
    const auto inst = generate_grid_instance(10, 50, 1);
    const auto st = compute_stats(inst.scenarios, false);
    EllipsoidTolerances tol;
    tol.max_sp_calls = 2;
    try {
        solve_ellipsoid_bb(inst.graph, st.mean, ellipsoid_weights(st, 1.0), inst.source, inst.target, tol);
        FAIL("expected LimitExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LimitExceeded);
    }
}

TEST_CASE("scenario min-max search") {
    SUBCASE("three parallel arcs") {
        const Graph g(2, {{0, 0, 1}, {1, 0, 1}, {2, 0, 1}});
        const ScenarioMatrix m({{1.0, 9.0, 6.0}, {9.0, 1.0, 6.0}});
        const auto st = compute_stats(m, false);
        const auto sol = solve_scenario_minmax(
            g, [&](const Path& p) { return worst_case_convex_hull(m, st.mean, 1.0, p); }, st.mean, 0, 1);
        CHECK(sol.path == Path(g, {2}));
        CHECK(sol.robust_value == 6.0);
    }
    SUBCASE("a single scenario reduces to a shortest path") {
        std::mt19937_64 rng(6);
        const Graph g = grid_graph(5);
        const auto m = random_scenarios(g, 1, rng);
        const auto st = compute_stats(m, false);
        const auto sol = solve_scenario_minmax(
            g, [&](const Path& p) { return worst_case_convex_hull(m, st.mean, 1.0, p); }, st.mean, 0, 24);
        CHECK(sol.robust_value == shortest_path(g, st.mean, 0, 24).cost);
    }
    SUBCASE("matches enumeration for hull and permutohull oracles") {
        std::mt19937_64 rng(7);
        const Graph g = grid_graph(4);
        const auto paths = test::grid_paths_by_moves(g, 4);
        for (int i = 0; i < 50; ++i) {
            const auto m = random_scenarios(g, 5, rng);
            const auto st = compute_stats(m, false);
            for (const char* text : {"convex-hull:1", "convex-hull:0.4", "permutohull:2", "sym-permutohull:2"}) {
                const auto spec = parse_uncertainty_spec(text);
                const PathOracle oracle = make_oracle(spec, m, st);
                const auto sol = solve_scenario_minmax(g, oracle, minmax_bound_costs(spec, m, st), 0, 15);
                CHECK(close(sol.robust_value, best_by_enumeration(paths, oracle)));
            }
        }
    }
    SUBCASE("node budget") {
        std::mt19937_64 rng(8);
        const Graph g = grid_graph(6, GridOrientation::Bidirected);
        const auto m = random_scenarios(g, 10, rng);
        const auto st = compute_stats(m, false);
        try {
            solve_scenario_minmax(
                g, [&](const Path& p) { return worst_case_convex_hull(m, st.mean, 1.0, p); }, st.mean, 0, 35, {5});
            FAIL("expected NodeBudgetExceeded");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NodeBudgetExceeded);
        }
    }
}

TEST_CASE("scenario bound costs") {
    const ScenarioMatrix m({{2.0, 4.0}, {6.0, 0.0}});
    const auto st = compute_stats(m, false);
    const auto b = scenario_bound_costs(m, st.mean, std::vector<double>{0.25, 0.75});
    CHECK(b[0] == doctest::Approx(5.0));
    CHECK(b[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(scenario_bound_costs(m, st.mean, std::vector<double>{0.5, 0.6}), Error);
}

TEST_CASE("brute force") {
    const Graph line(3, {{0, 0, 1}, {1, 1, 2}});
    const CostVector c{1.0, 1.0};
    CHECK(solve_bruteforce(line, [&](const Path& p) { return p.cost(c); }, 0, 2, 10).path == Path(line, {0, 1}));
    const Graph g = test::diamond();
    const auto st = diamond_stats();
    const auto sol = solve_bruteforce(g, [&](const Path& p) { return worst_case_ellipsoid(st, 1.0, p, true); }, 0, 2, 10);
    CHECK(sol.path == Path(g, {0}));
    CHECK(sol.robust_value == 10.0);
    CHECK_THROWS_AS(solve_bruteforce(grid_graph(4), [](const Path&) { return 0.0; }, 0, 15, 10), Error);
}

TEST_CASE("dispatch re-evaluates the robust value with the set's oracle") {
    std::mt19937_64 rng(9);
    const Graph g = grid_graph(4);
    const auto m = random_scenarios(g, 12, rng);
    const auto st = compute_stats(m, true);
    for (const char* text : {"average", "interval:0.5", "budgeted:2.5", "ellipsoid:2", "ellipsoid-full:2",
                             "convex-hull:0.7", "permutohull:3", "sym-permutohull:4"}) {
        const Method method = parse_method(text);
        const auto sol = solve_robust(g, method, m, st, 0, 15);
        const double expected = method ? make_oracle(*method, m, st)(sol.path) : sol.path.cost(st.mean);
        CHECK(sol.robust_value == expected);
        CHECK(sol.sp_calls >= 1);
        SolveOptions brute;
        brute.algorithm = Algorithm::BruteForce;
        const auto reference = solve_robust(g, method, m, st, 0, 15, brute);
        if (!(method && !method->diagonal_only)) CHECK(close(sol.robust_value, reference.robust_value));
        CHECK(reference.robust_value <= sol.robust_value + 1e-9);
    }
    CHECK(method_name(parse_method("average")) == "average");
    CHECK(method_name(parse_method("ellipsoid-full:1")) == "ellipsoid-full");
    CHECK(parse_algorithm("bb") == Algorithm::BranchAndBound);
    CHECK_THROWS_AS(parse_algorithm("simplex"), Error);
    SolveOptions naive;
    naive.algorithm = Algorithm::Naive;
    CHECK_THROWS_AS(solve_robust(g, parse_method("interval:1"), m, st, 0, 15, naive), Error);
    CHECK_THROWS_AS(solve_robust(g, parse_method("permutohull:13"), m, st, 0, 15), Error);
}
