#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/scd/constraint_matrix.hpp"
#include "matmcd/scd/dataset.hpp"

namespace matmcd {

/// Residual variance floor used by the Gaussian likelihood.
inline constexpr double kBicVarianceFloor = 1e-12;

/// Linear-Gaussian BIC scorer: -2 logL + (|parents| + 2) ln m, lower is better.
/// Builds the covariance matrix once; every local score is a small solve.
class BicScorer {
public:
    /// Throws DataError on a constant column.
    explicit BicScorer(const Dataset& data);

    double local_score(NodeId node, std::span<const NodeId> parents) const;
    /// Sum of local scores over every node of a DAG.
    double total_score(const CausalGraph& dag) const;

    std::size_t variable_count() const noexcept { return static_cast<std::size_t>(cov_.rows()); }

private:
    Eigen::MatrixXd cov_;
    std::size_t sample_count_;
};

double bic_score(const Dataset& data, NodeId node, std::span<const NodeId> parents);

struct ExactSearchOptions {
    std::size_t max_parents = 2;
    /// Subset DP is exponential; refuse anything wider.
    std::size_t max_variables = 20;
};

struct ExactSearchResult {
    CausalGraph graph;
    double total_score = 0.0;
};

/// Globally BIC-optimal DAG under the parent cap and constraints, by dynamic
/// programming over variable subsets (best parent set per candidate pool, then
/// best sink per subset). Forbidden edges never enter a parent set; Required
/// edges must. Throws InfeasibleConstraints when the Required edges are cyclic
/// or give some node more than max_parents parents.
ExactSearchResult exact_search(const Dataset& data, const ConstraintMatrix& constraints,
                               const ExactSearchOptions& options = {});
ExactSearchResult exact_search(const Dataset& data, const ExactSearchOptions& options = {});

}  // namespace matmcd
