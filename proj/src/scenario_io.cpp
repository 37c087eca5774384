#include <charconv>
#include <fstream>
#include <sstream>

#include "rsp/error.hpp"
#include "rsp/scenario.hpp"

namespace rsp {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::optional<double> parse_cell(const std::string& cell, std::size_t line_no) {
    if (cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN") return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
    return value;
}

struct RawCsv {
    std::vector<Timestamp> timestamps;
    std::vector<std::vector<std::optional<double>>> rows;
};

RawCsv parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_fields(line);
            break;
        }
    }
    if (header.empty()) throw Error(ErrorCode::ParseError, "CSV has no header");
    const bool timestamped = header.front() == "timestamp";
    const std::size_t arcs = header.size() - (timestamped ? 1 : 0);
    for (std::size_t e = 0; e < arcs; ++e) {
        const std::string expected = "arc_" + std::to_string(e);
        if (header[e + (timestamped ? 1 : 0)] != expected)
            throw Error(ErrorCode::ParseError, "header column " + std::to_string(e) + " should be " + expected);
    }
    RawCsv csv;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != header.size())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(header.size()) + " fields");
        std::size_t first = 0;
        if (timestamped) {
            csv.timestamps.push_back(parse_timestamp(fields[0]));
            first = 1;
        }
        std::vector<std::optional<double>> row;
        row.reserve(arcs);
        for (std::size_t k = first; k < fields.size(); ++k) row.push_back(parse_cell(fields[k], line_no));
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

std::string read_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

ScenarioMatrix parse_scenario_csv(const std::string& text) {
    RawCsv csv = parse_csv(text);
    std::vector<std::vector<double>> rows;
    rows.reserve(csv.rows.size());
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        std::vector<double> row;
        for (const auto& cell : csv.rows[i]) {
            if (!cell) throw Error(ErrorCode::ParseError, "scenario row " + std::to_string(i) + " has a missing value");
            row.push_back(*cell);
        }
        rows.push_back(std::move(row));
    }
    return ScenarioMatrix(rows, std::move(csv.timestamps));
}

ScenarioMatrix read_scenario_csv(const std::string& file) { return parse_scenario_csv(read_file(file)); }

SpeedRecordTable parse_speed_csv(const std::string& text) {
    RawCsv csv = parse_csv(text);
    SpeedRecordTable table;
    table.timestamps = std::move(csv.timestamps);
    table.speeds = std::move(csv.rows);
    return table;
}

SpeedRecordTable read_speed_csv(const std::string& file) { return parse_speed_csv(read_file(file)); }

std::string scenario_csv(const ScenarioMatrix& matrix) {
    std::string out;
    if (matrix.has_timestamps()) out += "timestamp,";
    for (std::size_t e = 0; e < matrix.cols(); ++e) {
        if (e > 0) out += ',';
        out += "arc_" + std::to_string(e);
    }
    out += '\n';
    char buf[32];
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        if (matrix.has_timestamps()) out += format_timestamp(matrix.timestamps()[i]) + ',';
        for (std::size_t e = 0; e < matrix.cols(); ++e) {
            if (e > 0) out += ',';
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, matrix.at(i, e));
            out.append(buf, ptr);
        }
        out += '\n';
    }
    return out;
}

}  // namespace rsp
