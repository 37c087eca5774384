#pragma once

#include <bitset>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rsp/graph.hpp"

namespace rsp {

using Timestamp = std::chrono::sys_seconds;

/// Parses "YYYY-MM-DDTHH:MM[:SS][Z]" (a space may replace the 'T'); throws ParseError.
Timestamp parse_timestamp(const std::string& text);
std::string format_timestamp(Timestamp ts);

/// Raw speed observations in miles per hour; std::nullopt marks a missing record.
struct SpeedRecordTable {
    std::vector<Timestamp> timestamps;                     // empty means equispaced rows
    std::vector<std::vector<std::optional<double>>> speeds;  // [row][arc]
    std::vector<double> lengths_miles;                       // optional, per arc

    std::size_t row_count() const noexcept { return speeds.size(); }
    std::size_t arc_count() const noexcept { return speeds.empty() ? 0 : speeds.front().size(); }
    bool complete() const;
};

struct CleaningRules {
    double min_speed_mph = 3.0;
    double default_speed_mph = 20.0;
    bool interpolate = true;
};

/// N scenarios (rows) of per-arc travel times in minutes, optionally timestamped.
class ScenarioMatrix {
public:
    ScenarioMatrix() = default;
    ScenarioMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                   std::vector<Timestamp> timestamps = {});
    explicit ScenarioMatrix(const std::vector<std::vector<double>>& rows, std::vector<Timestamp> timestamps = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0; }
    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values_).subspan(i * cols_, cols_);
    }
    double at(std::size_t i, std::size_t e) const { return values_[i * cols_ + e]; }

    bool has_timestamps() const noexcept { return !timestamps_.empty(); }
    std::span<const Timestamp> timestamps() const noexcept { return timestamps_; }

    /// c^i . x for every scenario i.
    std::vector<double> path_costs(const Path& path) const;

    /// Rows in the given order (timestamps follow their rows).
    ScenarioMatrix select(std::span<const std::size_t> indices) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
    std::vector<Timestamp> timestamps_;
};

struct ScenarioStats {
    CostVector mean;
    CostVector lower;
    CostVector upper;
    CostVector diag_variance;
    std::optional<Eigen::MatrixXd> covariance;

    std::size_t arc_count() const noexcept { return mean.size(); }
};

/// Days are indexed like std::chrono::weekday (0 = Sunday); minutes of day form [start, end).
struct TimeWindow {
    std::bitset<7> days{0b1111111};
    int start_minute = 0;
    int end_minute = 24 * 60;

    bool contains(Timestamp ts) const;

    static TimeWindow all();
    static TimeWindow mornings();  // weekdays 08:00-10:00
    static TimeWindow evenings();  // weekdays 16:00-18:00
    static TimeWindow tuesdays();
    static TimeWindow weekends();
    /// Preset name ("mornings", "evenings", "tuesdays", "weekends", "all").
    static TimeWindow preset(const std::string& name);
};

SpeedRecordTable clean_speed_records(const SpeedRecordTable& table, const CleaningRules& rules = {});

ScenarioMatrix to_travel_times(const SpeedRecordTable& speeds, std::span<const double> lengths_miles);

ScenarioMatrix filter_scenarios(const ScenarioMatrix& matrix, const TimeWindow& window);

ScenarioStats compute_stats(const ScenarioMatrix& matrix, bool full_covariance);

struct SampleSplit {
    ScenarioMatrix in_sample;
    ScenarioMatrix out_sample;
    std::vector<std::size_t> in_rows;   // indices into the original matrix, ascending
    std::vector<std::size_t> out_rows;  // ascending
};

/// floor(fraction * N) rows drawn uniformly without replacement; the rest form the out-sample.
SampleSplit split_sample(const ScenarioMatrix& matrix, double fraction, std::uint64_t seed);

// CSV: optional leading "timestamp" column, then arc_0..arc_{n-1}.
ScenarioMatrix read_scenario_csv(const std::string& file);
ScenarioMatrix parse_scenario_csv(const std::string& text);
SpeedRecordTable read_speed_csv(const std::string& file);
SpeedRecordTable parse_speed_csv(const std::string& text);
std::string scenario_csv(const ScenarioMatrix& matrix);

}  // namespace rsp
