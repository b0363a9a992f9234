#pragma once

#include <cstddef>

#include "matmcd/graph/causal_graph.hpp"

namespace matmcd {

/// Edge-level agreement between a predicted graph and the ground truth.
///
/// Ratios whose denominator is zero are reported as 0.0 and flagged, so
/// metric tables always fill.
struct GraphMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double fpr = 0.0;
    std::size_t shd = 0;
    double nhd = 0.0;

    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;

    bool precision_degenerate = false;
    bool recall_degenerate = false;
    bool fpr_degenerate = false;
};

/// Structural Hamming distance: one operation per node pair whose edge state
/// (absent, forward, backward, undirected) differs. A reversal counts 1.
std::size_t shd(const CausalGraph& pred, const CausalGraph& truth);

/// shd / n^2.
double nhd(const CausalGraph& pred, const CausalGraph& truth);
double nhd_from_shd(std::size_t shd, std::size_t node_count);

GraphMetrics confusion_metrics(const CausalGraph& pred, const CausalGraph& truth);

/// Round-half-even at `decimals` places, used for the printed metric tables.
double round_half_even(double value, int decimals);

}  // namespace matmcd
