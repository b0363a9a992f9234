#include "matmcd/graph/metrics.hpp"

#include <cmath>

#include "matmcd/util/error.hpp"

namespace matmcd {

namespace {

void require_same_nodes(const CausalGraph& pred, const CausalGraph& truth) {
    if (pred.node_count() != truth.node_count()) {
        throw Error("node-set mismatch: predicted graph has " + std::to_string(pred.node_count()) +
                    " nodes, truth has " + std::to_string(truth.node_count()));
    }
}

int pair_state(const CausalGraph& g, NodeId a, NodeId b) {
    return (g.has_edge(a, b) ? 1 : 0) | (g.has_edge(b, a) ? 2 : 0);
}

}  // namespace

std::size_t shd(const CausalGraph& pred, const CausalGraph& truth) {
    require_same_nodes(pred, truth);
    const std::size_t n = pred.node_count();
    std::size_t distance = 0;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            if (pair_state(pred, a, b) != pair_state(truth, a, b)) ++distance;
        }
    }
    return distance;
}

double nhd_from_shd(std::size_t shd_value, std::size_t node_count) {
    if (node_count == 0) throw Error("nhd undefined for an empty node set");
    return static_cast<double>(shd_value) / static_cast<double>(node_count * node_count);
}

double nhd(const CausalGraph& pred, const CausalGraph& truth) {
    return nhd_from_shd(shd(pred, truth), pred.node_count());
}

GraphMetrics confusion_metrics(const CausalGraph& pred, const CausalGraph& truth) {
    require_same_nodes(pred, truth);
    GraphMetrics m;
    for (const auto& e : pred.edges()) {
        if (truth.edges().count(e)) {
            ++m.true_positives;
        } else {
            ++m.false_positives;
        }
    }
    for (const auto& e : truth.edges()) {
        if (!pred.edges().count(e)) ++m.false_negatives;
    }

    const auto ratio = [](std::size_t num, std::size_t den, bool& degenerate) {
        if (den == 0) {
            degenerate = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.precision = ratio(m.true_positives, m.true_positives + m.false_positives, m.precision_degenerate);
    m.recall = ratio(m.true_positives, m.true_positives + m.false_negatives, m.recall_degenerate);
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;

    const std::size_t n = pred.node_count();
    const std::size_t ordered_pairs = n * (n > 0 ? n - 1 : 0);
    m.fpr = ratio(m.false_positives, ordered_pairs - truth.edge_count(), m.fpr_degenerate);

    m.shd = shd(pred, truth);
    m.nhd = n > 0 ? nhd_from_shd(m.shd, n) : 0.0;
    return m;
}

double round_half_even(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double scaled = value * scale;
    const double floor_v = std::floor(scaled);
    const double frac = scaled - floor_v;
    double rounded;
    if (std::abs(frac - 0.5) < 1e-9) {
        rounded = std::fmod(floor_v, 2.0) == 0.0 ? floor_v : floor_v + 1.0;
    } else {
        rounded = std::round(scaled);
    }
    return rounded / scale;
}

}  // namespace matmcd
