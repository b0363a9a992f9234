#pragma once

#include <cstddef>
#include <vector>

#include "matmcd/graph/causal_graph.hpp"

namespace matmcd {

enum class EdgeConstraint { Unknown, Required, Forbidden };

/// n x n edge directives with a confidence in [0, 1] per cell.
///
/// Entry (i, j) speaks about the directed edge i -> j. The diagonal is always
/// Unknown, and Unknown cells carry confidence 0.
class ConstraintMatrix {
public:
    explicit ConstraintMatrix(std::size_t n = 0);

    std::size_t size() const noexcept { return n_; }

    EdgeConstraint at(NodeId from, NodeId to) const;
    double confidence(NodeId from, NodeId to) const;

    void set(NodeId from, NodeId to, EdgeConstraint value, double confidence = 1.0);
    void require(NodeId from, NodeId to, double confidence = 1.0) { set(from, to, EdgeConstraint::Required, confidence); }
    void forbid(NodeId from, NodeId to, double confidence = 1.0) { set(from, to, EdgeConstraint::Forbidden, confidence); }
    void clear(NodeId from, NodeId to) { set(from, to, EdgeConstraint::Unknown, 0.0); }

    bool is_required(NodeId from, NodeId to) const { return at(from, to) == EdgeConstraint::Required; }
    bool is_forbidden(NodeId from, NodeId to) const { return at(from, to) == EdgeConstraint::Forbidden; }
    bool all_unknown() const;

    std::vector<Edge> required_edges() const;
    std::vector<Edge> forbidden_edges() const;
    /// Graph whose edges are exactly the Required cells.
    CausalGraph required_graph() const;

    bool operator==(const ConstraintMatrix& other) const = default;

private:
    std::size_t index(NodeId from, NodeId to) const;

    std::size_t n_;
    std::vector<EdgeConstraint> cells_;
    std::vector<double> confidences_;
};

const char* to_string(EdgeConstraint value);

}  // namespace matmcd
