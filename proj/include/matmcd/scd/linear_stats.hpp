#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "matmcd/graph/causal_graph.hpp"

namespace matmcd::stats {

/// Population covariance (divisor m) of the columns of `samples`.
Eigen::MatrixXd covariance(const Eigen::MatrixXd& samples);

/// Covariance of the OLS residuals of columns `a` and `b` after regressing
/// each on `given` (with intercept), read off the full covariance matrix:
/// S_ab - S_aG S_GG^+ S_Gb.
double residual_covariance(const Eigen::MatrixXd& cov, NodeId a, NodeId b, std::span<const NodeId> given);

/// OLS fit of `target` on `predictors` with intercept; returns the slopes.
Eigen::VectorXd regression_slopes(const Eigen::MatrixXd& samples, NodeId target, std::span<const NodeId> predictors);

}  // namespace matmcd::stats
