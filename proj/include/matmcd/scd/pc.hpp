#pragma once

#include <cstddef>

#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/scd/constraint_matrix.hpp"
#include "matmcd/scd/dataset.hpp"

namespace matmcd {

struct PcOptions {
    double alpha = 0.05;
    /// Largest conditioning set tried during skeleton search.
    std::size_t max_conditioning_size = 3;
};

/// PC search with Fisher z tests. Returns a CPDAG (undirected edges stored as
/// mutual pairs).
///
/// Constraints are hard background knowledge: a pair forbidden in both
/// directions is never adjacent, a Required edge is never removed and is
/// oriented as required, and a Forbidden direction is never produced.
/// The skeleton phase is order-independent (adjacencies are frozen per level).
CausalGraph pc_discover(const Dataset& data, const ConstraintMatrix& constraints, const PcOptions& options = {});
CausalGraph pc_discover(const Dataset& data, const PcOptions& options = {});

}  // namespace matmcd
