#include "matmcd/graph/graph_io.hpp"

#include <sstream>

#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd {

nlohmann::json graph_to_json(const CausalGraph& graph, const MetaData& meta) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [from, to] : graph.edges()) {
        nlohmann::json e = {{"from", from}, {"to", to}};
        if (auto w = graph.weight(from, to)) e["weight"] = *w;
        edges.push_back(std::move(e));
    }
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        nodes.push_back(v < meta.names.size() ? meta.names[v] : std::to_string(v));
    }
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"mode", to_string(graph.mode())}};
}

CausalGraph graph_from_json(const nlohmann::json& doc) {
    try {
        const auto& nodes = doc.at("nodes");
        GraphMode mode = GraphMode::Dag;
        if (doc.contains("mode")) {
            const auto m = doc.at("mode").get<std::string>();
            if (m == "cpdag") {
                mode = GraphMode::Cpdag;
            } else if (m != "dag") {
                throw Error("unknown graph mode '" + m + "'");
            }
        }
        CausalGraph graph(nodes.size(), mode);
        for (const auto& e : doc.at("edges")) {
            std::optional<double> w;
            if (e.contains("weight") && !e.at("weight").is_null()) w = e.at("weight").get<double>();
            graph.add_edge(e.at("from").get<NodeId>(), e.at("to").get<NodeId>(), w);
        }
        return graph;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(std::string("malformed graph JSON: ") + ex.what());
    }
}

std::string to_dot(const CausalGraph& graph, const MetaData& meta) {
    std::ostringstream out;
    out << "digraph \"" << meta.title << "\" {\n";
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        out << "  n" << v << " [label=\"" << meta.names.at(v) << "\"];\n";
    }
    for (const auto& [from, to] : graph.edges()) {
        if (graph.is_undirected(from, to)) {
            if (from < to) out << "  n" << from << " -> n" << to << " [dir=none];\n";
            continue;
        }
        out << "  n" << from << " -> n" << to;
        if (auto w = graph.weight(from, to)) out << " [label=\"" << text::format_decimal(*w) << "\"]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace matmcd
