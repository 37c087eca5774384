#include "rsp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "rsp/error.hpp"

namespace rsp {

namespace {

// Seconds since the first row, or the row index when the table carries no timestamps.
std::vector<double> row_times(const SpeedRecordTable& table) {
    std::vector<double> times(table.row_count());
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = table.timestamps.empty()
                       ? static_cast<double>(i)
                       : static_cast<double>((table.timestamps[i] - table.timestamps.front()).count());
    }
    return times;
}

void check_table(const SpeedRecordTable& table) {
    if (table.row_count() == 0) throw Error(ErrorCode::EmptyTable, "speed table has no rows");
    const std::size_t n = table.arc_count();
    for (const auto& row : table.speeds)
        if (row.size() != n) throw Error(ErrorCode::DimensionMismatch, "speed rows have different lengths");
    if (!table.timestamps.empty()) {
        if (table.timestamps.size() != table.row_count())
            throw Error(ErrorCode::DimensionMismatch, "timestamp count does not match row count");
        for (std::size_t i = 1; i < table.timestamps.size(); ++i)
            if (table.timestamps[i] <= table.timestamps[i - 1])
                throw Error(ErrorCode::InvalidArgument, "speed table timestamps must be strictly increasing");
    }
}

}  // namespace

Timestamp parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int consumed = 0;
    const int fields = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d%n", &y, &mo, &d, &sep, &h, &mi, &consumed);
    if (fields < 6 || (sep != 'T' && sep != ' '))
        throw Error(ErrorCode::ParseError, "bad timestamp '" + text + "'");
    std::string rest = text.substr(static_cast<std::size_t>(consumed));
    if (!rest.empty() && rest.front() == ':') {
        int more = 0;
        if (std::sscanf(rest.c_str(), ":%d%n", &s, &more) != 1)
            throw Error(ErrorCode::ParseError, "bad timestamp '" + text + "'");
        rest = rest.substr(static_cast<std::size_t>(more));
    }
    if (!rest.empty() && rest != "Z") throw Error(ErrorCode::ParseError, "bad timestamp '" + text + "'");
    const std::chrono::year_month_day date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                           std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60)
        throw Error(ErrorCode::ParseError, "bad timestamp '" + text + "'");
    return std::chrono::sys_days{date} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{s};
}

std::string format_timestamp(Timestamp ts) {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const std::chrono::year_month_day date{day};
    const std::chrono::hh_mm_ss tod{ts - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

bool SpeedRecordTable::complete() const {
    for (const auto& row : speeds)
        for (const auto& v : row)
            if (!v) return false;
    return true;
}

ScenarioMatrix::ScenarioMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                               std::vector<Timestamp> timestamps)
    : rows_(rows), cols_(cols), values_(std::move(values)), timestamps_(std::move(timestamps)) {
    if (values_.size() != rows_ * cols_)
        throw Error(ErrorCode::DimensionMismatch, "scenario values do not fill a rows x cols matrix");
    if (!timestamps_.empty() && timestamps_.size() != rows_)
        throw Error(ErrorCode::DimensionMismatch, "timestamp count does not match scenario count");
    for (double v : values_)
        if (!std::isfinite(v) || v < 0.0)
            throw Error(ErrorCode::InvalidCost, "scenario travel times must be finite and nonnegative");
}

ScenarioMatrix::ScenarioMatrix(const std::vector<std::vector<double>>& rows, std::vector<Timestamp> timestamps) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw Error(ErrorCode::DimensionMismatch, "scenario rows have different lengths");
        values.insert(values.end(), r.begin(), r.end());
    }
    *this = ScenarioMatrix(rows.size(), cols, std::move(values), std::move(timestamps));
}

std::vector<double> ScenarioMatrix::path_costs(const Path& path) const {
    std::vector<double> costs(rows_);
    for (std::size_t i = 0; i < rows_; ++i) costs[i] = path.cost(row(i));
    return costs;
}

ScenarioMatrix ScenarioMatrix::select(std::span<const std::size_t> indices) const {
    std::vector<double> values;
    values.reserve(indices.size() * cols_);
    std::vector<Timestamp> stamps;
    for (std::size_t i : indices) {
        if (i >= rows_) throw Error(ErrorCode::IndexOutOfRange, "scenario row " + std::to_string(i));
        const auto r = row(i);
        values.insert(values.end(), r.begin(), r.end());
        if (has_timestamps()) stamps.push_back(timestamps_[i]);
    }
    return ScenarioMatrix(indices.size(), cols_, std::move(values), std::move(stamps));
}

bool TimeWindow::contains(Timestamp ts) const {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const std::chrono::weekday wd{day};
    if (!days.test(wd.c_encoding())) return false;
    const auto minute = std::chrono::duration_cast<std::chrono::minutes>(ts - day).count();
    return minute >= start_minute && minute < end_minute;
}

TimeWindow TimeWindow::all() { return {}; }
TimeWindow TimeWindow::mornings() { return {std::bitset<7>{0b0111110}, 8 * 60, 10 * 60}; }
TimeWindow TimeWindow::evenings() { return {std::bitset<7>{0b0111110}, 16 * 60, 18 * 60}; }
TimeWindow TimeWindow::tuesdays() { return {std::bitset<7>{0b0000100}, 0, 24 * 60}; }
TimeWindow TimeWindow::weekends() { return {std::bitset<7>{0b1000001}, 0, 24 * 60}; }

TimeWindow TimeWindow::preset(const std::string& name) {
    if (name == "all" || name == "complete") return all();
    if (name == "mornings") return mornings();
    if (name == "evenings") return evenings();
    if (name == "tuesdays") return tuesdays();
    if (name == "weekends") return weekends();
    throw Error(ErrorCode::InvalidArgument, "unknown time window preset '" + name + "'");
}

SpeedRecordTable clean_speed_records(const SpeedRecordTable& table, const CleaningRules& rules) {
    check_table(table);
    const std::vector<double> times = row_times(table);
    SpeedRecordTable out = table;
    const std::size_t rows = table.row_count();
    for (std::size_t e = 0; e < table.arc_count(); ++e) {
        std::vector<std::size_t> recorded;
        for (std::size_t i = 0; i < rows; ++i)
            if (table.speeds[i][e]) recorded.push_back(i);
        if (recorded.empty()) {
            for (std::size_t i = 0; i < rows; ++i) out.speeds[i][e] = rules.default_speed_mph;
            continue;
        }
        auto value = [&](std::size_t i) { return std::max(*table.speeds[i][e], rules.min_speed_mph); };
        std::size_t next = 0;  // index into `recorded` of the first record at or after row i
        for (std::size_t i = 0; i < rows; ++i) {
            while (next < recorded.size() && recorded[next] < i) ++next;
            if (next < recorded.size() && recorded[next] == i) {
                out.speeds[i][e] = value(i);
            } else if (next == 0) {
                out.speeds[i][e] = value(recorded.front());
            } else if (next == recorded.size()) {
                out.speeds[i][e] = value(recorded.back());
            } else if (!rules.interpolate) {
                out.speeds[i][e] = value(recorded[next - 1]);
            } else {
                const std::size_t p = recorded[next - 1], q = recorded[next];
                const double w = (times[i] - times[p]) / (times[q] - times[p]);
                out.speeds[i][e] = value(p) + w * (value(q) - value(p));
            }
        }
    }
    return out;
}

ScenarioMatrix to_travel_times(const SpeedRecordTable& speeds, std::span<const double> lengths_miles) {
    if (speeds.row_count() == 0) throw Error(ErrorCode::EmptyTable, "speed table has no rows");
    const std::size_t n = speeds.arc_count();
    if (lengths_miles.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "need one length per arc, got " + std::to_string(lengths_miles.size()));
    for (double len : lengths_miles)
        if (!std::isfinite(len) || len <= 0.0) throw Error(ErrorCode::InvalidArgument, "arc lengths must be positive");
    std::vector<double> values;
    values.reserve(speeds.row_count() * n);
    for (const auto& row : speeds.speeds) {
        if (row.size() != n) throw Error(ErrorCode::DimensionMismatch, "speed rows have different lengths");
        for (std::size_t e = 0; e < n; ++e) {
            if (!row[e]) throw Error(ErrorCode::IncompleteSpeeds, "missing speed record; clean the table first");
            if (*row[e] <= 0.0) throw Error(ErrorCode::InvalidArgument, "speeds must be positive");
            values.push_back(60.0 * lengths_miles[e] / *row[e]);
        }
    }
    return ScenarioMatrix(speeds.row_count(), n, std::move(values), speeds.timestamps);
}

ScenarioMatrix filter_scenarios(const ScenarioMatrix& matrix, const TimeWindow& window) {
    if (!matrix.has_timestamps()) throw Error(ErrorCode::NoTimestamps, "cannot filter scenarios without timestamps");
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < matrix.rows(); ++i)
        if (window.contains(matrix.timestamps()[i])) keep.push_back(i);
    return matrix.select(keep);
}

ScenarioStats compute_stats(const ScenarioMatrix& matrix, bool full_covariance) {
    if (matrix.empty()) throw Error(ErrorCode::EmptyMatrix, "no scenarios");
    const std::size_t rows = matrix.rows(), n = matrix.cols();
    const double inv_n = 1.0 / static_cast<double>(rows);
    std::vector<double> mean(n, 0.0), lower(n), upper(n), var(n, 0.0);
    for (std::size_t e = 0; e < n; ++e) {
        lower[e] = upper[e] = matrix.at(0, e);
        for (std::size_t i = 0; i < rows; ++i) {
            const double v = matrix.at(i, e);
            mean[e] += v;
            lower[e] = std::min(lower[e], v);
            upper[e] = std::max(upper[e], v);
        }
        mean[e] *= inv_n;
        // rounding can push the mean a hair outside [min, max] when all values coincide
        mean[e] = std::clamp(mean[e], lower[e], upper[e]);
        for (std::size_t i = 0; i < rows; ++i) {
            const double dev = matrix.at(i, e) - mean[e];
            var[e] += dev * dev;
        }
        var[e] *= inv_n;
    }
    std::optional<Eigen::MatrixXd> covariance;
    if (full_covariance) {
        Eigen::MatrixXd centered(rows, n);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t e = 0; e < n; ++e) centered(i, e) = matrix.at(i, e) - mean[e];
        Eigen::MatrixXd sigma = (centered.transpose() * centered) * inv_n;
        sigma = 0.5 * (sigma + sigma.transpose()).eval();
        for (std::size_t e = 0; e < n; ++e) sigma(e, e) = var[e];
        covariance = std::move(sigma);
    }
    return {CostVector(std::move(mean)), CostVector(std::move(lower)), CostVector(std::move(upper)),
            CostVector(std::move(var)), std::move(covariance)};
}

SampleSplit split_sample(const ScenarioMatrix& matrix, double fraction, std::uint64_t seed) {
    if (matrix.empty()) throw Error(ErrorCode::EmptyMatrix, "no scenarios to split");
    if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(ErrorCode::InvalidArgument, "fraction must be in (0, 1]");
    const std::size_t rows = matrix.rows();
    const auto in_count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(rows) + 1e-9));
    std::vector<std::size_t> all(rows);
    for (std::size_t i = 0; i < rows; ++i) all[i] = i;
    SampleSplit split;
    std::mt19937_64 rng(seed);
    std::sample(all.begin(), all.end(), std::back_inserter(split.in_rows), in_count, rng);
    std::sort(split.in_rows.begin(), split.in_rows.end());
    std::set_difference(all.begin(), all.end(), split.in_rows.begin(), split.in_rows.end(),
                        std::back_inserter(split.out_rows));
    split.in_sample = matrix.select(split.in_rows);
    split.out_sample = matrix.select(split.out_rows);
    return split;
}

}  // namespace rsp
