#pragma once

#include <limits>
#include <vector>

#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/scd/constraint_matrix.hpp"
#include "matmcd/scd/dataset.hpp"

namespace matmcd {

/// Passing this as soft_weight turns the constraint penalty into a hard rule.
inline constexpr double kHardConstraintWeight = std::numeric_limits<double>::infinity();

struct DirectLingamOptions {
    /// Penalty multiplier for orderings that contradict a Required entry.
    double soft_weight = 1.0;
    /// Edges with |coefficient| below this are pruned (Required edges are kept).
    double weight_threshold = 0.05;
};

struct DirectLingamResult {
    CausalGraph graph;
    std::vector<NodeId> causal_order;
};

/// DirectLiNGAM: repeatedly picks the most exogenous remaining variable by the
/// pairwise maximum-entropy mutual-information contrast, regresses it out of
/// the rest, and finally fits OLS coefficients along the recovered order.
///
/// A candidate that would be placed before the tail of one of its Required
/// in-edges pays soft_weight x confidence on its score. Forbidden edges are
/// never fitted.
DirectLingamResult direct_lingam(const Dataset& data, const ConstraintMatrix& constraints,
                                 const DirectLingamOptions& options = {});
DirectLingamResult direct_lingam(const Dataset& data, const DirectLingamOptions& options = {});

namespace lingam_detail {
/// Maximum-entropy approximation of differential entropy for a standardized sample.
double entropy(const Eigen::VectorXd& u);
/// Entropy-based likelihood-ratio contrast; negative values favour j -> i.
double diff_mutual_info(const Eigen::VectorXd& xi_std, const Eigen::VectorXd& xj_std);
}  // namespace lingam_detail

}  // namespace matmcd
