#include "matmcd/scd/direct_lingam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "matmcd/scd/linear_stats.hpp"
#include "matmcd/util/error.hpp"

namespace matmcd {

namespace lingam_detail {

namespace {

Eigen::VectorXd standardize(const Eigen::VectorXd& x) {
    const double mean = x.mean();
    const Eigen::VectorXd centered = x.array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(x.size()));
    if (sd <= 0.0) throw DataError("degenerate column in DirectLiNGAM");
    return centered / sd;
}

// Residual of xi after regressing on xj (both centred).
Eigen::VectorXd residual(const Eigen::VectorXd& xi, const Eigen::VectorXd& xj) {
    const double m = static_cast<double>(xi.size());
    const double mi = xi.mean();
    const double mj = xj.mean();
    const double cov = ((xi.array() - mi) * (xj.array() - mj)).sum() / m;
    const double var = (xj.array() - mj).square().sum() / m;
    return xi - (cov / var) * xj;
}

}  // namespace

double entropy(const Eigen::VectorXd& u) {
    constexpr double k1 = 79.047;
    constexpr double k2 = 7.4129;
    constexpr double gamma = 0.37457;
    const double m = static_cast<double>(u.size());
    const double log_cosh = u.array().cosh().log().sum() / m;
    const double gauss = (u.array() * (-u.array().square() / 2.0).exp()).sum() / m;
    return (1.0 + std::log(2.0 * std::numbers::pi)) / 2.0 - k1 * std::pow(log_cosh - gamma, 2) -
           k2 * std::pow(gauss, 2);
}

double diff_mutual_info(const Eigen::VectorXd& xi_std, const Eigen::VectorXd& xj_std) {
    const Eigen::VectorXd ri_j = standardize(residual(xi_std, xj_std));
    const Eigen::VectorXd rj_i = standardize(residual(xj_std, xi_std));
    return (entropy(xj_std) + entropy(ri_j)) - (entropy(xi_std) + entropy(rj_i));
}

}  // namespace lingam_detail

DirectLingamResult direct_lingam(const Dataset& data, const DirectLingamOptions& options) {
    return direct_lingam(data, ConstraintMatrix(data.variable_count()), options);
}

DirectLingamResult direct_lingam(const Dataset& data, const ConstraintMatrix& constraints,
                                 const DirectLingamOptions& options) {
    data.validate();
    const std::size_t n = data.variable_count();
    const std::size_t m = data.sample_count();
    if (m <= n) throw DataError("DirectLiNGAM needs more samples than variables");
    if (constraints.size() != n) throw Error("constraint matrix size does not match the dataset");
    if (std::isnan(options.soft_weight) || options.soft_weight < 0.0) throw Error("soft_weight must be non-negative");
    const bool hard = std::isinf(options.soft_weight);
    if (hard) {
        if (auto cycle = find_cycle(constraints.required_graph())) {
            throw InfeasibleConstraints("required edges form a cycle; no causal order can honour them");
        }
    }

    std::vector<Eigen::VectorXd> work(n);
    for (NodeId v = 0; v < n; ++v) work[v] = data.samples.col(static_cast<Eigen::Index>(v));

    std::vector<NodeId> remaining(n);
    for (NodeId v = 0; v < n; ++v) remaining[v] = v;
    std::vector<NodeId> order;
    order.reserve(n);

    while (!remaining.empty()) {
        NodeId root = remaining.front();
        if (remaining.size() > 1) {
            std::vector<Eigen::VectorXd> standardized(n);
            for (NodeId v : remaining) standardized[v] = lingam_detail::standardize(work[v]);

            double best = std::numeric_limits<double>::infinity();
            bool found = false;
            for (NodeId c : remaining) {
                double penalty = 0.0;
                for (NodeId j : remaining) {
                    if (j == c || !constraints.is_required(j, c)) continue;
                    penalty += hard ? std::numeric_limits<double>::infinity()
                                    : options.soft_weight * constraints.confidence(j, c);
                }
                double measure = 0.0;
                for (NodeId j : remaining) {
                    if (j == c) continue;
                    const double d = lingam_detail::diff_mutual_info(standardized[c], standardized[j]);
                    measure += std::pow(std::min(0.0, d), 2);
                }
                const double score = measure + penalty;
                if (!found || score < best) {
                    best = score;
                    root = c;
                    found = true;
                }
            }
        }
        for (NodeId v : remaining) {
            if (v != root) work[v] = lingam_detail::residual(work[v], work[root]);
        }
        remaining.erase(std::find(remaining.begin(), remaining.end(), root));
        order.push_back(root);
    }

    DirectLingamResult result{CausalGraph(n, GraphMode::Dag), order};
    for (std::size_t pos = 1; pos < n; ++pos) {
        const NodeId target = order[pos];
        std::vector<NodeId> predictors;
        for (std::size_t q = 0; q < pos; ++q) {
            if (!constraints.is_forbidden(order[q], target)) predictors.push_back(order[q]);
        }
        if (predictors.empty()) continue;
        Eigen::VectorXd slopes = stats::regression_slopes(data.samples, target, predictors);

        std::vector<NodeId> kept;
        for (std::size_t k = 0; k < predictors.size(); ++k) {
            if (std::abs(slopes(k)) >= options.weight_threshold || constraints.is_required(predictors[k], target)) {
                kept.push_back(predictors[k]);
            }
        }
        if (kept.empty()) continue;
        if (kept.size() != predictors.size()) slopes = stats::regression_slopes(data.samples, target, kept);
        for (std::size_t k = 0; k < kept.size(); ++k) result.graph.add_edge(kept[k], target, slopes(k));
    }
    return result;
}

}  // namespace matmcd
