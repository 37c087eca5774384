#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rsp/bench.hpp"
#include "rsp/error.hpp"
#include "rsp/grid.hpp"
#include "rsp/solvers.hpp"
#include "support.hpp"

using namespace rsp;

TEST_CASE("grid graphs") {
    const Graph g = grid_graph(5);
    CHECK(g.node_count() == 25);
    CHECK(g.arc_count() == 40);
    for (const Arc& a : g.arcs()) CHECK(a.head > a.tail);  // acyclic: ids only increase
    CHECK(enumerate_simple_paths(grid_graph(4), 0, 15, 100).size() == 20);
    const Graph b = grid_graph(5, GridOrientation::Bidirected);
    CHECK(b.arc_count() == 80);
    CHECK(reachable(b, 24, 0));
    CHECK_FALSE(reachable(g, 24, 0));
    CHECK_THROWS_AS(grid_graph(1), Error);
    CHECK(parse_orientation("bidirected") == GridOrientation::Bidirected);
    CHECK_THROWS_AS(parse_orientation("diagonal"), Error);
}

TEST_CASE("grid instances") {
    const auto inst = generate_grid_instance(5, 50, 7);
    CHECK(inst.scenarios.rows() == 50);
    CHECK(inst.scenarios.cols() == 40);
    CHECK(inst.source == 0);
    CHECK(inst.target == 24);
    bool saw_low = false, saw_high = false;
    for (std::size_t i = 0; i < 50; ++i) {
        for (std::size_t e = 0; e < 40; ++e) {
            const double v = inst.scenarios.at(i, e);
            CHECK(v >= 1.0);
            CHECK(v <= 100.0);
            CHECK(v == std::floor(v));
            saw_low |= v <= 5.0;
            saw_high |= v >= 96.0;
        }
    }
    CHECK(saw_low);
    CHECK(saw_high);
    CHECK_THROWS_AS(generate_grid_instance(5, 0, 1), Error);
}

TEST_CASE("property: grid generation is reproducible per seed and orientation") {
    for (auto o : {GridOrientation::RightDown, GridOrientation::Bidirected}) {
        const auto a = generate_grid_instance(6, 20, 99, o);
        const auto b = generate_grid_instance(6, 20, 99, o);
        REQUIRE(a.scenarios.rows() == b.scenarios.rows());
        for (std::size_t i = 0; i < 20; ++i)
            for (std::size_t e = 0; e < a.scenarios.cols(); ++e) CHECK(a.scenarios.at(i, e) == b.scenarios.at(i, e));
    }
    const auto c = generate_grid_instance(6, 20, 100);
    const auto d = generate_grid_instance(6, 20, 99);
    CHECK(c.scenarios.at(0, 0) + c.scenarios.at(1, 1) + c.scenarios.at(2, 2) !=
          d.scenarios.at(0, 0) + d.scenarios.at(1, 1) + d.scenarios.at(2, 2));
    CHECK(instance_seed(42, 5, 0) != instance_seed(42, 5, 1));
    CHECK(instance_seed(42, 5, 0) != instance_seed(42, 10, 0));
}

TEST_CASE("correlated synthetic scenarios") {
    const auto m = correlated_grid_scenarios(6, 40, 5);
    CHECK(m.rows() == 40);
    CHECK(m.cols() == grid_graph(6).arc_count());
    CHECK(m.has_timestamps());
    const auto st = compute_stats(m, true);
    // shared congestion makes arcs covary positively
    double positive = 0, total = 0;
    for (long i = 0; i < st.covariance->rows(); ++i)
        for (long j = 0; j < i; ++j) {
            total += 1;
            positive += (*st.covariance)(i, j) > 0 ? 1 : 0;
        }
    CHECK(positive / total > 0.9);
}

TEST_CASE("benchmark report") {
    BenchOptions options;
    options.sizes = {4, 5};
    options.instances = 30;
    options.algorithms = {"bb", "naive", "bruteforce"};
    const auto report = run_grid_benchmark(options);
    REQUIRE(report.rows.size() == 6);
    CHECK(report.rows[0].size == 4);
    CHECK(report.rows[0].algorithm == "bb");
    CHECK(report.rows[3].size == 5);
    for (const auto& r : report.rows) {
        CHECK(r.instances == 30);
        CHECK(r.mean_sp_calls >= 1.0);
        CHECK(r.max_runtime_s >= r.mean_runtime_s);
    }
    CHECK(report.samples.size() == 180);
    // all three agree on every instance
    for (std::size_t i = 0; i < report.samples.size(); i += 3) {
        CHECK(test::close(report.samples[i].robust_value, report.samples[i + 1].robust_value));
        CHECK(test::close(report.samples[i].robust_value, report.samples[i + 2].robust_value));
    }
    const std::string csv = bench_csv(report);
    CHECK(csv.rfind("size,algorithm,instances,mean_sp_calls,mean_runtime_s,max_runtime_s\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(bench_json(report).find("\"mean_sp_calls\"") != std::string::npos);
}

TEST_CASE("benchmark errors") {
    BenchOptions options;
    options.sizes = {8};
    options.instances = 1;
    options.algorithms = {"bruteforce"};
    options.path_limit = 100;
    try {
        run_grid_benchmark(options);
        FAIL("expected LimitExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LimitExceeded);
    }
    options.algorithms = {"simplex"};
    CHECK_THROWS_AS(run_grid_benchmark(options), Error);
}

TEST_CASE("call counts grow slowly with the grid side") {
    BenchOptions options;
    options.sizes = {5, 20, 50};
    options.instances = 40;
    const auto report = run_grid_benchmark(options);
    CHECK(report.rows[2].mean_sp_calls < report.rows[0].mean_sp_calls + 3);
    CHECK(report.rows[1].mean_runtime_s / report.rows[0].mean_runtime_s < 50);
}
