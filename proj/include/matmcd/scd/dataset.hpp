#pragma once

#include <Eigen/Dense>

#include "matmcd/graph/causal_graph.hpp"

namespace matmcd {

/// m x n observational samples (rows = observations, columns = variables).
struct Dataset {
    Eigen::MatrixXd samples;
    MetaData meta;

    Dataset() = default;
    Dataset(Eigen::MatrixXd samples, MetaData meta);

    std::size_t sample_count() const noexcept { return static_cast<std::size_t>(samples.rows()); }
    std::size_t variable_count() const noexcept { return static_cast<std::size_t>(samples.cols()); }

    /// Throws DataError on non-finite cells, a names/column mismatch, or bad metadata.
    void validate() const;
};

}  // namespace matmcd
