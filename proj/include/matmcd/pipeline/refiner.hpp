#pragma once

#include <optional>
#include <string>
#include <vector>

#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/pipeline/config.hpp"
#include "matmcd/scd/constraint_matrix.hpp"
#include "matmcd/scd/dataset.hpp"

namespace matmcd::pipeline {

/// A Required entry turned into Unknown during conflict resolution.
struct Demotion {
    NodeId from = 0;
    NodeId to = 0;
    double confidence = 0.0;
    std::string reason;  // "cycle" or "max_parents"
};

struct Resolution {
    ConstraintMatrix constraints;
    std::vector<Demotion> demotions;
};

/// While the Required edges contain a cycle, demotes the least confident
/// Required edge on the cycle found (ties: smallest (i, j)).
ConstraintMatrix resolve_conflicts(const ConstraintMatrix& constraints);

/// Cycle demotion, then (when `max_parents` is given) demotion of the least
/// confident Required in-edges of any node above the cap (ties: largest
/// source index goes first).
Resolution resolve_conflicts_detailed(const ConstraintMatrix& constraints,
                                      std::optional<std::size_t> max_parents = std::nullopt);

/// Runs the configured engine under `constraints`. PC output is oriented into
/// a DAG; the raw CPDAG is returned through `cpdag` when requested.
CausalGraph run_engine(const Dataset& data, const ConstraintMatrix& constraints, const PipelineConfig& config,
                       CausalGraph* cpdag = nullptr);

/// Constrained rerun of the estimator. The result is always a DAG.
CausalGraph refine_graph(const Dataset& data, const ConstraintMatrix& constraints, const PipelineConfig& config);

}  // namespace matmcd::pipeline
