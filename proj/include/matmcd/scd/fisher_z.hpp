#pragma once

#include <span>

#include <Eigen/Dense>

#include "matmcd/scd/dataset.hpp"

namespace matmcd {

struct CiTestResult {
    double partial_correlation = 0.0;
    double statistic = 0.0;
    double p_value = 1.0;
    bool independent = true;
};

/// |r| is clamped to this bound before the z-transform.
inline constexpr double kMaxAbsCorrelation = 1.0 - 1e-12;

/// Fisher z statistic and two-sided normal p-value for a (partial) correlation
/// `r` estimated from `sample_count` rows with `conditioning_size` controls.
CiTestResult fisher_z_from_correlation(double r, std::size_t sample_count, std::size_t conditioning_size,
                                       double alpha);

/// Conditional-independence test of columns i and j given `given`.
/// Reuses one covariance matrix across calls; safe for concurrent use.
class FisherZTest {
public:
    explicit FisherZTest(const Dataset& data);

    CiTestResult operator()(NodeId i, NodeId j, std::span<const NodeId> given, double alpha) const;

    std::size_t sample_count() const noexcept { return sample_count_; }

private:
    Eigen::MatrixXd cov_;
    Eigen::VectorXd mean_sq_;
    std::size_t sample_count_;
};

CiTestResult fisher_z_test(const Dataset& data, NodeId i, NodeId j, std::span<const NodeId> given, double alpha);

}  // namespace matmcd
