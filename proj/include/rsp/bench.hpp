#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rsp/grid.hpp"

namespace rsp {

struct BenchOptions {
    std::vector<int> sizes{5, 10, 20};
    std::size_t instances = 100;
    std::uint64_t seed = 42;
    std::vector<std::string> algorithms{"bb"};  // any of naive, bb, bruteforce
    std::size_t samples = 50;
    GridOrientation orientation = GridOrientation::RightDown;
    double lambda = 1.0;
    std::size_t path_limit = 100'000;  // bruteforce only
};

/// One solve of one instance.
struct BenchSample {
    int size = 0;
    std::size_t instance = 0;
    std::string algorithm;
    std::size_t sp_calls = 0;
    double runtime_s = 0.0;
    double robust_value = 0.0;
};

struct BenchRow {
    int size = 0;
    std::string algorithm;
    std::size_t instances = 0;
    double mean_sp_calls = 0.0;
    double mean_runtime_s = 0.0;
    double max_runtime_s = 0.0;
};

struct BenchReport {
    std::vector<BenchRow> rows;  // size-major, algorithms in request order
    std::vector<BenchSample> samples;
};

/// Seed of instance `index` of grid side `k`; independent of which algorithms run.
std::uint64_t instance_seed(std::uint64_t seed, int k, std::size_t index);

BenchReport run_grid_benchmark(const BenchOptions& options);

/// Header `size,algorithm,instances,mean_sp_calls,mean_runtime_s,max_runtime_s`.
std::string bench_csv(const BenchReport& report);
std::string bench_json(const BenchReport& report);

}  // namespace rsp
