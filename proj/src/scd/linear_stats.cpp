#include "matmcd/scd/linear_stats.hpp"

#include "matmcd/util/error.hpp"

namespace matmcd::stats {

Eigen::MatrixXd covariance(const Eigen::MatrixXd& samples) {
    const Eigen::Index m = samples.rows();
    if (m == 0) throw DataError("covariance of an empty sample");
    const Eigen::RowVectorXd mean = samples.colwise().mean();
    const Eigen::MatrixXd centered = samples.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(m);
}

namespace {

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& cov, std::span<const NodeId> rows, std::span<const NodeId> cols) {
    Eigen::MatrixXd out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = cov(rows[r], cols[c]);
    }
    return out;
}

}  // namespace

double residual_covariance(const Eigen::MatrixXd& cov, NodeId a, NodeId b, std::span<const NodeId> given) {
    if (given.empty()) return cov(a, b);
    const NodeId ab[2] = {a, b};
    const Eigen::MatrixXd s_gg = submatrix(cov, given, given);
    const Eigen::MatrixXd s_gx = submatrix(cov, given, ab);
    // Complete orthogonal decomposition acts as a pseudo-inverse when the
    // conditioning columns are collinear.
    const Eigen::MatrixXd beta = s_gg.completeOrthogonalDecomposition().solve(s_gx);
    return cov(a, b) - s_gx.col(0).dot(beta.col(1));
}

Eigen::VectorXd regression_slopes(const Eigen::MatrixXd& samples, NodeId target, std::span<const NodeId> predictors) {
    if (predictors.empty()) return Eigen::VectorXd();
    const Eigen::Index m = samples.rows();
    Eigen::MatrixXd design(m, predictors.size() + 1);
    design.col(0).setOnes();
    for (std::size_t k = 0; k < predictors.size(); ++k) design.col(k + 1) = samples.col(predictors[k]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < design.cols()) throw DataError("singular regression design");
    const Eigen::VectorXd coef = qr.solve(samples.col(target));
    return coef.tail(predictors.size());
}

}  // namespace matmcd::stats
