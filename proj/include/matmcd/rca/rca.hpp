#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "matmcd/graph/causal_graph.hpp"

namespace matmcd::rca {

inline constexpr double kDefaultRestart = 0.15;
inline constexpr double kResidualTolerance = 1e-10;
inline constexpr std::size_t kMinSeriesLength = 10;
/// Scale making the MAD a consistent estimator of a normal standard deviation.
inline constexpr double kMadScale = 1.4826;

/// Nodes by decreasing stationary score (ties: lower index first).
struct Ranking {
    std::vector<NodeId> order;
    std::vector<double> scores;  // indexed by node, sums to 1

    /// 1-based position of `node`.
    std::size_t rank_of(NodeId node) const;
};

struct RcaCase {
    std::string fault_id;
    std::string group;  // dataset the fault belongs to, for per-dataset MAP
    std::vector<double> anomaly_scores;
    std::set<NodeId> truth_root_causes;
};

struct EvaluatedCase {
    Ranking ranking;
    std::set<NodeId> truth;
};

/// Largest |x - median| / (1.4826 MAD) of a series. Constant series give 0;
/// a zero MAD with deviating points gives infinity.
double max_robust_z(const std::vector<double>& series);

/// Indices of the series whose max robust z reaches `z_threshold`. Throws on
/// series shorter than 10 points or non-finite values.
std::vector<NodeId> prefilter_anomalous(const std::vector<std::vector<double>>& series, double z_threshold);

/// Restart distribution: scores normalized to sum 1, uniform if all zero.
Eigen::VectorXd restart_distribution(const std::vector<double>& anomaly_scores);

/// Row-stochastic transitions of the walk on the reversed graph (an effect
/// moves to one of its causes uniformly). Rows of nodes without parents
/// carry the restart distribution.
Eigen::MatrixXd transition_matrix(const CausalGraph& graph, const Eigen::VectorXd& restart_dist);

/// Power iteration of x <- (1-c) P^T x + c e until the L1 change is below 1e-10.
Ranking rwr_rank(const CausalGraph& graph, const std::vector<double>& anomaly_scores, double restart = kDefaultRestart);

/// Direct solve of (I - (1-c) P^T) x = c e.
Eigen::VectorXd rwr_direct_solve(const CausalGraph& graph, const std::vector<double>& anomaly_scores,
                                 double restart = kDefaultRestart);

/// PR@j = hits in the first j positions / min(j, |truth|).
double precision_at(const Ranking& ranking, const std::set<NodeId>& truth, std::size_t j);
/// Mean over faults of the mean of PR@1..PR@K.
double map_at_k(const std::vector<EvaluatedCase>& cases, std::size_t k);
/// Mean over faults of 1 / rank of the first true root cause; 0 for a fault with no hit.
double mrr(const std::vector<EvaluatedCase>& cases);

/// Rank of the first true root cause, 0 when none is ranked.
std::size_t first_hit_rank(const EvaluatedCase& c);

}  // namespace matmcd::rca
