#pragma once

#include <string>

#include <json.hpp>

#include "matmcd/graph/causal_graph.hpp"

namespace matmcd {

/// {"nodes": [names], "edges": [{"from": i, "to": j, "weight": w?}], "mode": "dag"|"cpdag"}
nlohmann::json graph_to_json(const CausalGraph& graph, const MetaData& meta);
CausalGraph graph_from_json(const nlohmann::json& doc);

/// Graphviz digraph with node labels taken from the metadata names.
/// Undirected CPDAG pairs are drawn once with dir=none.
std::string to_dot(const CausalGraph& graph, const MetaData& meta);

}  // namespace matmcd
