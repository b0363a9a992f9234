#include "matmcd/scd/constraint_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "matmcd/util/error.hpp"

namespace matmcd {

ConstraintMatrix::ConstraintMatrix(std::size_t n)
    : n_(n), cells_(n * n, EdgeConstraint::Unknown), confidences_(n * n, 0.0) {}

std::size_t ConstraintMatrix::index(NodeId from, NodeId to) const {
    if (from >= n_ || to >= n_) {
        throw Error("constraint index (" + std::to_string(from) + ", " + std::to_string(to) +
                    ") out of range for " + std::to_string(n_) + " variables");
    }
    return from * n_ + to;
}

EdgeConstraint ConstraintMatrix::at(NodeId from, NodeId to) const { return cells_[index(from, to)]; }

double ConstraintMatrix::confidence(NodeId from, NodeId to) const { return confidences_[index(from, to)]; }

void ConstraintMatrix::set(NodeId from, NodeId to, EdgeConstraint value, double confidence) {
    const std::size_t k = index(from, to);
    if (from == to && value != EdgeConstraint::Unknown) throw Error("diagonal constraints must stay unknown");
    if (!std::isfinite(confidence)) throw Error("constraint confidence must be finite");
    cells_[k] = value;
    confidences_[k] = value == EdgeConstraint::Unknown ? 0.0 : std::clamp(confidence, 0.0, 1.0);
}

bool ConstraintMatrix::all_unknown() const {
    return std::all_of(cells_.begin(), cells_.end(), [](EdgeConstraint c) { return c == EdgeConstraint::Unknown; });
}

std::vector<Edge> ConstraintMatrix::required_edges() const {
    std::vector<Edge> out;
    for (NodeId i = 0; i < n_; ++i) {
        for (NodeId j = 0; j < n_; ++j) {
            if (cells_[i * n_ + j] == EdgeConstraint::Required) out.emplace_back(i, j);
        }
    }
    return out;
}

std::vector<Edge> ConstraintMatrix::forbidden_edges() const {
    std::vector<Edge> out;
    for (NodeId i = 0; i < n_; ++i) {
        for (NodeId j = 0; j < n_; ++j) {
            if (cells_[i * n_ + j] == EdgeConstraint::Forbidden) out.emplace_back(i, j);
        }
    }
    return out;
}

CausalGraph ConstraintMatrix::required_graph() const {
    CausalGraph g(n_);
    for (const auto& [i, j] : required_edges()) g.add_edge(i, j);
    return g;
}

const char* to_string(EdgeConstraint value) {
    switch (value) {
        case EdgeConstraint::Required: return "required";
        case EdgeConstraint::Forbidden: return "forbidden";
        case EdgeConstraint::Unknown: break;
    }
    return "unknown";
}

}  // namespace matmcd
