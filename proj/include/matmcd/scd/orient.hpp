#pragma once

#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/scd/constraint_matrix.hpp"

namespace matmcd {

/// Turns a CPDAG into a DAG.
///
/// Required edges present in the input are placed first, then directed edges,
/// then each undirected pair in (i, j) order: the Required direction if any,
/// else the direction not Forbidden, else the higher-confidence direction,
/// else lower index -> higher index. A direction that would close a cycle is
/// flipped; a pair that fits neither way is dropped. Throws
/// InfeasibleConstraints when the Required edges are themselves cyclic.
CausalGraph orient_cpdag(const CausalGraph& cpdag, const ConstraintMatrix& constraints);

}  // namespace matmcd
