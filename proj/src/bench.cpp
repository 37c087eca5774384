#include "rsp/bench.hpp"

#include <algorithm>
#include <charconv>

#include <json.hpp>

#include "rsp/error.hpp"
#include "rsp/solvers.hpp"
#include "rsp/uncertainty.hpp"

namespace rsp {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, int k, std::size_t index) {
    return splitmix(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(k))) + index);
}

BenchReport run_grid_benchmark(const BenchOptions& options) {
    for (const std::string& a : options.algorithms) {
        if (a != "naive" && a != "bb" && a != "bruteforce")
            throw Error(ErrorCode::InvalidArgument, "benchmark algorithm must be naive, bb or bruteforce, got '" + a + "'");
    }
    if (options.lambda < 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonnegative");

    BenchReport report;
    for (int k : options.sizes) {
        std::vector<BenchRow> rows;
        for (const std::string& a : options.algorithms) rows.push_back({k, a, 0, 0.0, 0.0, 0.0});
        for (std::size_t i = 0; i < options.instances; ++i) {
            const GridInstance inst =
                generate_grid_instance(k, options.samples, instance_seed(options.seed, k, i), options.orientation);
            const ScenarioStats stats = compute_stats(inst.scenarios, false);
            const CostVector d = ellipsoid_weights(stats, options.lambda);
            for (std::size_t j = 0; j < options.algorithms.size(); ++j) {
                const std::string& a = options.algorithms[j];
                RobustSolution sol;
                if (a == "naive") {
                    sol = solve_ellipsoid_naive(inst.graph, stats.mean, d, inst.source, inst.target);
                } else if (a == "bb") {
                    sol = solve_ellipsoid_bb(inst.graph, stats.mean, d, inst.source, inst.target);
                } else {
                    const UncertaintySpec spec{SetKind::Ellipsoid, options.lambda, true};
                    sol = solve_bruteforce(inst.graph, make_oracle(spec, inst.scenarios, stats), inst.source,
                                           inst.target, options.path_limit);
                }
                report.samples.push_back({k, i, a, sol.sp_calls, sol.runtime_seconds, sol.robust_value});
                BenchRow& row = rows[j];
                ++row.instances;
                row.mean_sp_calls += static_cast<double>(sol.sp_calls);
                row.mean_runtime_s += sol.runtime_seconds;
                row.max_runtime_s = std::max(row.max_runtime_s, sol.runtime_seconds);
            }
        }
        for (BenchRow& row : rows) {
            if (row.instances > 0) {
                row.mean_sp_calls /= static_cast<double>(row.instances);
                row.mean_runtime_s /= static_cast<double>(row.instances);
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

std::string bench_csv(const BenchReport& report) {
    std::string out = "size,algorithm,instances,mean_sp_calls,mean_runtime_s,max_runtime_s\n";
    for (const BenchRow& r : report.rows) {
        out += std::to_string(r.size) + ',' + r.algorithm + ',' + std::to_string(r.instances) + ',' +
               number(r.mean_sp_calls) + ',' + number(r.mean_runtime_s) + ',' + number(r.max_runtime_s) + '\n';
    }
    return out;
}

std::string bench_json(const BenchReport& report) {
    nlohmann::json doc = nlohmann::json::array();
    for (const BenchRow& r : report.rows) {
        doc.push_back({{"size", r.size},
                       {"algorithm", r.algorithm},
                       {"instances", r.instances},
                       {"mean_sp_calls", r.mean_sp_calls},
                       {"mean_runtime_s", r.mean_runtime_s},
                       {"max_runtime_s", r.max_runtime_s}});
    }
    return doc.dump(2);
}

}  // namespace rsp
