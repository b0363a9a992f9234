#include "matmcd/scd/dataset.hpp"

#include "matmcd/util/error.hpp"

namespace matmcd {

Dataset::Dataset(Eigen::MatrixXd s, MetaData m) : samples(std::move(s)), meta(std::move(m)) { validate(); }

void Dataset::validate() const {
    meta.validate();
    if (static_cast<std::size_t>(samples.cols()) != meta.names.size()) {
        throw DataError("dataset has " + std::to_string(samples.cols()) + " columns but " +
                        std::to_string(meta.names.size()) + " variable names");
    }
    if (!samples.allFinite()) throw DataError("dataset contains non-finite values");
}

}  // namespace matmcd
