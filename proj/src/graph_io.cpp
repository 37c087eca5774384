#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rsp/error.hpp"
#include "rsp/graph.hpp"

namespace rsp {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidNode: return "InvalidNode";
        case ErrorCode::InvalidGraph: return "InvalidGraph";
        case ErrorCode::InvalidCost: return "InvalidCost";
        case ErrorCode::NoPath: return "NoPath";
        case ErrorCode::LimitExceeded: return "LimitExceeded";
        case ErrorCode::EmptyTable: return "EmptyTable";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::IncompleteSpeeds: return "IncompleteSpeeds";
        case ErrorCode::NoTimestamps: return "NoTimestamps";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::MissingCovariance: return "MissingCovariance";
        case ErrorCode::NonFiniteCosts: return "NonFiniteCosts";
        case ErrorCode::NodeBudgetExceeded: return "NodeBudgetExceeded";
        case ErrorCode::InsufficientConnectivity: return "InsufficientConnectivity";
        case ErrorCode::UnsupportedExactSolve: return "UnsupportedExactSolve";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

Graph parse_graph_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("graph JSON: ") + e.what());
    }
    try {
        const auto node_count = doc.at("nodes").get<NodeId>();
        std::vector<Arc> arcs;
        std::vector<double> lengths;
        bool any_length = false;
        bool all_lengths = true;
        for (const auto& item : doc.at("arcs")) {
            arcs.push_back({item.at("id").get<ArcId>(), item.at("tail").get<NodeId>(), item.at("head").get<NodeId>()});
            if (item.contains("length_miles") && !item["length_miles"].is_null()) {
                any_length = true;
                lengths.push_back(item["length_miles"].get<double>());
            } else {
                all_lengths = false;
                lengths.push_back(0.0);
            }
        }
        if (any_length && !all_lengths)
            throw Error(ErrorCode::InvalidGraph, "length_miles must be given for every arc or for none");
        if (!any_length) {
            lengths.clear();
        } else {
            // lengths were collected in file order; Graph sorts arcs by id
            std::vector<double> by_id(arcs.size(), 0.0);
            for (std::size_t k = 0; k < arcs.size(); ++k) {
                const auto id = static_cast<std::size_t>(arcs[k].id);
                if (arcs[k].id >= 0 && id < by_id.size()) by_id[id] = lengths[k];
            }
            lengths = std::move(by_id);
        }
        return Graph(node_count, std::move(arcs), std::move(lengths));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("graph JSON: ") + e.what());
    }
}

Graph load_graph_json(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::IoError, "cannot open graph file " + file);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_graph_json(buffer.str());
}

std::string graph_to_json(const Graph& graph) {
    nlohmann::json doc;
    doc["nodes"] = graph.node_count();
    doc["arcs"] = nlohmann::json::array();
    for (const Arc& a : graph.arcs()) {
        nlohmann::json item{{"id", a.id}, {"tail", a.tail}, {"head", a.head}};
        if (graph.has_lengths()) item["length_miles"] = graph.lengths_miles()[static_cast<std::size_t>(a.id)];
        doc["arcs"].push_back(std::move(item));
    }
    return doc.dump(1);
}

}  // namespace rsp
