#include "matmcd/scd/exact_search.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "matmcd/scd/linear_stats.hpp"
#include "matmcd/util/error.hpp"

namespace matmcd {

BicScorer::BicScorer(const Dataset& data) : cov_(stats::covariance(data.samples)), sample_count_(data.sample_count()) {
    data.validate();
    const Eigen::RowVectorXd mean = data.samples.colwise().mean();
    for (Eigen::Index v = 0; v < cov_.rows(); ++v) {
        if (cov_(v, v) <= 1e-12 * std::max(1.0, mean(v) * mean(v))) {
            throw DataError("constant column '" + data.meta.names[v] + "' has zero variance");
        }
    }
}

double BicScorer::local_score(NodeId node, std::span<const NodeId> parents) const {
    const auto n = static_cast<NodeId>(cov_.rows());
    if (node >= n) throw Error("BIC node out of range");
    for (NodeId p : parents) {
        if (p == node) throw Error("a node cannot be its own parent");
        if (p >= n) throw Error("BIC parent out of range");
    }
    const double m = static_cast<double>(sample_count_);
    const double variance = std::max(stats::residual_covariance(cov_, node, node, parents), kBicVarianceFloor);
    const double neg2_loglik = m * (std::log(2.0 * std::numbers::pi * variance) + 1.0);
    const double k = static_cast<double>(parents.size() + 2);
    return neg2_loglik + k * std::log(m);
}

double BicScorer::total_score(const CausalGraph& dag) const {
    double total = 0.0;
    for (NodeId v = 0; v < dag.node_count(); ++v) {
        const auto ps = dag.parents(v);
        total += local_score(v, ps);
    }
    return total;
}

double bic_score(const Dataset& data, NodeId node, std::span<const NodeId> parents) {
    return BicScorer(data).local_score(node, parents);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Drops bit `v` from `mask`, packing the higher bits down.
std::uint32_t compress(std::uint32_t mask, NodeId v) {
    const std::uint32_t low = mask & ((1u << v) - 1u);
    const std::uint32_t high = (mask >> (v + 1)) << v;
    return low | high;
}

std::uint32_t expand(std::uint32_t packed, NodeId v) {
    const std::uint32_t low = packed & ((1u << v) - 1u);
    const std::uint32_t high = (packed >> v) << (v + 1);
    return low | high;
}

std::vector<NodeId> mask_members(std::uint32_t mask) {
    std::vector<NodeId> out;
    while (mask) {
        out.push_back(static_cast<NodeId>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return out;
}

void check_feasible(const ConstraintMatrix& constraints, std::size_t max_parents) {
    const CausalGraph required = constraints.required_graph();
    if (auto cycle = find_cycle(required)) {
        std::string path;
        for (NodeId v : *cycle) path += (path.empty() ? "" : "->") + std::to_string(v);
        throw InfeasibleConstraints("required edges form a cycle: " + path);
    }
    for (NodeId v = 0; v < constraints.size(); ++v) {
        if (required.parents(v).size() > max_parents) {
            throw InfeasibleConstraints("node " + std::to_string(v) + " has more required parents than max_parents=" +
                                        std::to_string(max_parents));
        }
    }
}

}  // namespace

ExactSearchResult exact_search(const Dataset& data, const ExactSearchOptions& options) {
    return exact_search(data, ConstraintMatrix(data.variable_count()), options);
}

ExactSearchResult exact_search(const Dataset& data, const ConstraintMatrix& constraints,
                               const ExactSearchOptions& options) {
    const std::size_t n = data.variable_count();
    if (n > options.max_variables || n > 30) {
        throw Error("exact search is capped at " + std::to_string(options.max_variables) + " variables, got " +
                    std::to_string(n));
    }
    if (constraints.size() != n) throw Error("constraint matrix size does not match the dataset");
    check_feasible(constraints, options.max_parents);
    const BicScorer scorer(data);

    const std::uint32_t pool_size = n > 0 ? (1u << (n - 1)) : 1u;
    // best[v][pool]: lowest local score of v over parent sets inside `pool`
    // (pool indexed over the other n-1 variables).
    std::vector<std::vector<double>> best(n, std::vector<double>(pool_size, kInf));
    std::vector<std::vector<std::uint32_t>> best_set(n, std::vector<std::uint32_t>(pool_size, 0));

    for (NodeId v = 0; v < n; ++v) {
        std::uint32_t required_mask = 0;
        std::uint32_t forbidden_mask = 0;
        for (NodeId p = 0; p < n; ++p) {
            if (p == v) continue;
            if (constraints.is_required(p, v)) required_mask |= 1u << p;
            if (constraints.is_forbidden(p, v)) forbidden_mask |= 1u << p;
        }
        auto& scores = best[v];
        auto& sets = best_set[v];
        for (std::uint32_t packed = 0; packed < pool_size; ++packed) {
            const std::uint32_t full = expand(packed, v);
            if (static_cast<std::size_t>(std::popcount(full)) > options.max_parents) continue;
            if ((full & required_mask) != required_mask || (full & forbidden_mask) != 0) continue;
            scores[packed] = scorer.local_score(v, mask_members(full));
            sets[packed] = full;
        }
        // Relax: best within a pool is the best of its own set and every pool one element smaller.
        for (std::uint32_t packed = 1; packed < pool_size; ++packed) {
            for (std::uint32_t rest = packed; rest; rest &= rest - 1) {
                const std::uint32_t sub = packed & ~(rest & (~rest + 1));
                if (scores[sub] < scores[packed]) {
                    scores[packed] = scores[sub];
                    sets[packed] = sets[sub];
                }
            }
        }
    }

    const std::uint64_t subsets = std::uint64_t{1} << n;
    std::vector<double> dp(subsets, kInf);
    std::vector<std::int8_t> sink(subsets, -1);
    dp[0] = 0.0;
    for (std::uint64_t s = 1; s < subsets; ++s) {
        const auto mask = static_cast<std::uint32_t>(s);
        for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
            const auto v = static_cast<NodeId>(std::countr_zero(rest));
            const std::uint32_t others = mask & ~(1u << v);
            const double candidate = dp[others] + best[v][compress(others, v)];
            if (candidate < dp[s]) {
                dp[s] = candidate;
                sink[s] = static_cast<std::int8_t>(v);
            }
        }
    }
    if (!std::isfinite(dp[subsets - 1])) throw InfeasibleConstraints("no DAG satisfies the constraints");

    ExactSearchResult result{CausalGraph(n, GraphMode::Dag), dp[subsets - 1]};
    std::uint32_t remaining = static_cast<std::uint32_t>(subsets - 1);
    while (remaining) {
        const auto v = static_cast<NodeId>(sink[remaining]);
        const std::uint32_t others = remaining & ~(1u << v);
        for (NodeId p : mask_members(best_set[v][compress(others, v)])) result.graph.add_edge(p, v);
        remaining = others;
    }
    return result;
}

}  // namespace matmcd
