#include "matmcd/scd/fisher_z.hpp"

#include <algorithm>
#include <cmath>

#include "matmcd/scd/linear_stats.hpp"
#include "matmcd/util/error.hpp"

namespace matmcd {

CiTestResult fisher_z_from_correlation(double r, std::size_t sample_count, std::size_t conditioning_size,
                                       double alpha) {
    if (sample_count < conditioning_size + 4) {
        throw DataError("insufficient samples for Fisher z test: m=" + std::to_string(sample_count) +
                        " with conditioning set of size " + std::to_string(conditioning_size));
    }
    CiTestResult out;
    out.partial_correlation = r;
    const double z = std::atanh(std::min(std::abs(r), kMaxAbsCorrelation));
    const double dof = static_cast<double>(sample_count - conditioning_size - 3);
    out.statistic = std::sqrt(dof) * z;
    out.p_value = std::erfc(out.statistic / std::sqrt(2.0));
    out.independent = out.p_value > alpha;
    return out;
}

FisherZTest::FisherZTest(const Dataset& data)
    : cov_(stats::covariance(data.samples)),
      mean_sq_(data.samples.colwise().mean().array().square().transpose()),
      sample_count_(data.sample_count()) {}

CiTestResult FisherZTest::operator()(NodeId i, NodeId j, std::span<const NodeId> given, double alpha) const {
    const auto n = static_cast<NodeId>(cov_.rows());
    if (i == j) throw Error("Fisher z test needs two distinct variables");
    if (i >= n || j >= n) throw Error("Fisher z test variable out of range");
    const auto check_variance = [&](NodeId v) {
        if (cov_(v, v) <= 1e-12 * std::max(1.0, mean_sq_(v))) {
            throw DataError("zero-variance column " + std::to_string(v));
        }
    };
    check_variance(i);
    check_variance(j);
    for (NodeId s : given) {
        if (s == i || s == j) throw Error("conditioning set contains a tested variable");
        if (s >= n) throw Error("conditioning variable out of range");
        check_variance(s);
    }
    if (sample_count_ < given.size() + 4) {
        throw DataError("insufficient samples for Fisher z test: m=" + std::to_string(sample_count_) +
                        " with conditioning set of size " + std::to_string(given.size()));
    }

    // Canonical argument order keeps the result bit-identical under swapping i and j.
    if (i > j) std::swap(i, j);
    const double var_i = stats::residual_covariance(cov_, i, i, given);
    const double var_j = stats::residual_covariance(cov_, j, j, given);
    double r = 0.0;
    // A conditioning set that explains a column completely leaves nothing to correlate.
    if (var_i > 1e-12 * cov_(i, i) && var_j > 1e-12 * cov_(j, j)) {
        r = stats::residual_covariance(cov_, i, j, given) / std::sqrt(var_i * var_j);
    }
    return fisher_z_from_correlation(r, sample_count_, given.size(), alpha);
}

CiTestResult fisher_z_test(const Dataset& data, NodeId i, NodeId j, std::span<const NodeId> given, double alpha) {
    return FisherZTest(data)(i, j, given, alpha);
}

}  // namespace matmcd
