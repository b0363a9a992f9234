#include "matmcd/graph/causal_graph.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd {

std::string to_string(GraphMode mode) { return mode == GraphMode::Dag ? "dag" : "cpdag"; }

void MetaData::validate() const {
    if (names.empty()) throw DataError("metadata has no variable names");
    std::unordered_set<std::string> seen;
    for (const auto& name : names) {
        if (text::trim(name).empty()) throw DataError("variable name is blank");
        if (!seen.insert(name).second) throw DataError("duplicate variable name '" + name + "'");
    }
}

std::optional<NodeId> MetaData::index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<NodeId>(it - names.begin());
}

CausalGraph::CausalGraph(std::size_t node_count, GraphMode mode)
    : node_count_(node_count), mode_(mode) {}

void CausalGraph::check_node(NodeId node) const {
    if (node >= node_count_) {
        throw Error("node index " + std::to_string(node) + " out of range for graph with " +
                    std::to_string(node_count_) + " nodes");
    }
}

void CausalGraph::add_edge(NodeId from, NodeId to, std::optional<double> weight) {
    check_node(from);
    check_node(to);
    if (from == to) throw Error("self-loop on node " + std::to_string(from));
    edges_.insert({from, to});
    if (weight) weights_[{from, to}] = *weight;
}

bool CausalGraph::remove_edge(NodeId from, NodeId to) {
    weights_.erase({from, to});
    return edges_.erase({from, to}) > 0;
}

bool CausalGraph::has_edge(NodeId from, NodeId to) const { return edges_.count({from, to}) > 0; }

bool CausalGraph::adjacent(NodeId a, NodeId b) const { return has_edge(a, b) || has_edge(b, a); }

bool CausalGraph::is_undirected(NodeId a, NodeId b) const { return has_edge(a, b) && has_edge(b, a); }

void CausalGraph::set_weight(NodeId from, NodeId to, double weight) {
    if (!has_edge(from, to)) {
        throw Error("cannot weight missing edge " + std::to_string(from) + "->" + std::to_string(to));
    }
    weights_[{from, to}] = weight;
}

std::optional<double> CausalGraph::weight(NodeId from, NodeId to) const {
    auto it = weights_.find({from, to});
    if (it == weights_.end()) return std::nullopt;
    return it->second;
}

std::vector<NodeId> CausalGraph::parents(NodeId node) const {
    std::vector<NodeId> out;
    for (const auto& [from, to] : edges_) {
        if (to == node) out.push_back(from);
    }
    return out;
}

std::vector<NodeId> CausalGraph::children(NodeId node) const {
    std::vector<NodeId> out;
    for (auto it = edges_.lower_bound({node, 0}); it != edges_.end() && it->first == node; ++it) {
        out.push_back(it->second);
    }
    return out;
}

namespace {

std::vector<std::vector<NodeId>> directed_adjacency(const CausalGraph& graph) {
    std::vector<std::vector<NodeId>> adj(graph.node_count());
    const bool skip_mutual = graph.mode() == GraphMode::Cpdag;
    for (const auto& [from, to] : graph.edges()) {
        if (skip_mutual && graph.has_edge(to, from)) continue;
        adj[from].push_back(to);
    }
    return adj;
}

}  // namespace

std::optional<std::vector<NodeId>> topological_order(const CausalGraph& graph) {
    const auto adj = directed_adjacency(graph);
    const std::size_t n = graph.node_count();
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& out : adj) {
        for (NodeId to : out) ++indegree[to];
    }
    // Smallest ready index first keeps the order deterministic.
    std::set<NodeId> ready;
    for (NodeId v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.insert(v);
    }
    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        NodeId v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (NodeId to : adj[v]) {
            if (--indegree[to] == 0) ready.insert(to);
        }
    }
    if (order.size() != n) return std::nullopt;
    return order;
}

bool is_dag(const CausalGraph& graph) { return topological_order(graph).has_value(); }

std::optional<std::vector<NodeId>> find_cycle(const CausalGraph& graph) {
    const auto adj = directed_adjacency(graph);
    const std::size_t n = graph.node_count();
    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(n, Mark::White);
    std::vector<NodeId> stack;
    std::optional<std::vector<NodeId>> cycle;

    std::function<bool(NodeId)> visit = [&](NodeId v) {
        mark[v] = Mark::Grey;
        stack.push_back(v);
        for (NodeId to : adj[v]) {
            if (mark[to] == Mark::Grey) {
                auto start = std::find(stack.begin(), stack.end(), to);
                std::vector<NodeId> c(start, stack.end());
                c.push_back(to);
                cycle = std::move(c);
                return true;
            }
            if (mark[to] == Mark::White && visit(to)) return true;
        }
        stack.pop_back();
        mark[v] = Mark::Black;
        return false;
    };
    for (NodeId v = 0; v < n; ++v) {
        if (mark[v] == Mark::White && visit(v)) break;
    }
    return cycle;
}

bool creates_cycle(const CausalGraph& graph, NodeId from, NodeId to) {
    if (from == to) return true;
    // A cycle appears iff `from` is already reachable from `to`.
    const auto adj = directed_adjacency(graph);
    std::vector<bool> seen(graph.node_count(), false);
    std::vector<NodeId> frontier{to};
    seen[to] = true;
    while (!frontier.empty()) {
        NodeId v = frontier.back();
        frontier.pop_back();
        if (v == from) return true;
        for (NodeId next : adj[v]) {
            if (!seen[next]) {
                seen[next] = true;
                frontier.push_back(next);
            }
        }
    }
    return false;
}

std::string to_adjacency_list_text(const CausalGraph& graph, const MetaData& meta) {
    if (meta.names.size() < graph.node_count()) {
        throw Error("metadata names do not cover every graph node");
    }
    if (graph.edges().empty()) return "No edges.";
    std::vector<std::string> lines;
    lines.reserve(graph.edge_count());
    for (const auto& [from, to] : graph.edges()) {
        std::string line = meta.names[from] + " -> " + meta.names[to];
        if (auto w = graph.weight(from, to)) line += " (coef: " + text::format_decimal(*w) + ")";
        lines.push_back(std::move(line));
    }
    return text::join(lines, "\n");
}

}  // namespace matmcd
