#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace matmcd {

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;

enum class GraphMode { Dag, Cpdag };

std::string to_string(GraphMode mode);

/// Dataset title plus one descriptive name per variable.
struct MetaData {
    std::string title;
    std::vector<std::string> names;

    /// Throws when names are empty, duplicated, or blank.
    void validate() const;
    std::optional<NodeId> index_of(const std::string& name) const;
};

/// Directed graph over nodes 0..n-1 with optional edge coefficients.
///
/// In CPDAG mode an undirected edge i - j is stored as the mutual pair
/// (i, j) + (j, i). Weights can only be attached to existing edges; removing
/// an edge drops its weight.
class CausalGraph {
public:
    explicit CausalGraph(std::size_t node_count = 0, GraphMode mode = GraphMode::Dag);

    std::size_t node_count() const noexcept { return node_count_; }
    GraphMode mode() const noexcept { return mode_; }
    void set_mode(GraphMode mode) noexcept { mode_ = mode; }

    void add_edge(NodeId from, NodeId to, std::optional<double> weight = std::nullopt);
    bool remove_edge(NodeId from, NodeId to);
    bool has_edge(NodeId from, NodeId to) const;
    /// Edge in either direction.
    bool adjacent(NodeId a, NodeId b) const;
    /// Both directions present (a CPDAG undirected edge).
    bool is_undirected(NodeId a, NodeId b) const;

    void set_weight(NodeId from, NodeId to, double weight);
    std::optional<double> weight(NodeId from, NodeId to) const;
    const std::map<Edge, double>& weights() const noexcept { return weights_; }

    const std::set<Edge>& edges() const noexcept { return edges_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::vector<NodeId> parents(NodeId node) const;
    std::vector<NodeId> children(NodeId node) const;

    bool operator==(const CausalGraph& other) const = default;

private:
    void check_node(NodeId node) const;

    std::size_t node_count_;
    GraphMode mode_;
    std::set<Edge> edges_;
    std::map<Edge, double> weights_;
};

/// True iff the directed edges admit a topological order. In CPDAG mode
/// mutual pairs are undirected and ignored.
bool is_dag(const CausalGraph& graph);

std::optional<std::vector<NodeId>> topological_order(const CausalGraph& graph);

/// One directed cycle (first node repeated at the end), if any exists.
std::optional<std::vector<NodeId>> find_cycle(const CausalGraph& graph);

/// True when adding from->to to the directed part of `graph` would close a cycle.
bool creates_cycle(const CausalGraph& graph, NodeId from, NodeId to);

/// Renders the graph as the adjacency list embedded in model prompts.
std::string to_adjacency_list_text(const CausalGraph& graph, const MetaData& meta);

}  // namespace matmcd
