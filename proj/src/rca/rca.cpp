#include "matmcd/rca/rca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "matmcd/util/error.hpp"

namespace matmcd::rca {

namespace {

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return (lo + hi) / 2.0;
}

void check_restart(double c) {
    if (!(c > 0.0 && c <= 1.0)) throw Error("restart probability must lie in (0, 1]");
}

Ranking to_ranking(const Eigen::VectorXd& x) {
    Ranking r;
    r.scores.assign(x.data(), x.data() + x.size());
    r.order.resize(r.scores.size());
    std::iota(r.order.begin(), r.order.end(), NodeId{0});
    std::stable_sort(r.order.begin(), r.order.end(),
                     [&](NodeId a, NodeId b) { return r.scores[a] > r.scores[b]; });
    return r;
}

}  // namespace

std::size_t Ranking::rank_of(NodeId node) const {
    auto it = std::find(order.begin(), order.end(), node);
    if (it == order.end()) throw Error("node " + std::to_string(node) + " is not ranked");
    return static_cast<std::size_t>(it - order.begin()) + 1;
}

double max_robust_z(const std::vector<double>& series) {
    if (series.empty()) return 0.0;
    const double med = median(series);
    std::vector<double> dev(series.size());
    double max_dev = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        dev[t] = std::abs(series[t] - med);
        max_dev = std::max(max_dev, dev[t]);
    }
    if (max_dev == 0.0) return 0.0;
    const double scale = kMadScale * median(dev);
    if (scale == 0.0) return std::numeric_limits<double>::infinity();
    return max_dev / scale;
}

std::vector<NodeId> prefilter_anomalous(const std::vector<std::vector<double>>& series, double z_threshold) {
    std::vector<NodeId> kept;
    for (NodeId v = 0; v < series.size(); ++v) {
        const auto& s = series[v];
        if (s.size() < kMinSeriesLength) {
            throw DataError("series " + std::to_string(v) + " has " + std::to_string(s.size()) +
                            " points; at least " + std::to_string(kMinSeriesLength) + " are needed");
        }
        for (double x : s) {
            if (!std::isfinite(x)) throw DataError("series " + std::to_string(v) + " has a non-finite value");
        }
        const double z = max_robust_z(s);
        if (z > 0.0 && z >= z_threshold) kept.push_back(v);
    }
    return kept;
}

Eigen::VectorXd restart_distribution(const std::vector<double>& anomaly_scores) {
    const auto n = static_cast<Eigen::Index>(anomaly_scores.size());
    if (n == 0) throw Error("no nodes to rank");
    Eigen::VectorXd e(n);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = anomaly_scores[static_cast<std::size_t>(i)];
        if (!std::isfinite(s) || s < 0.0) throw DataError("anomaly scores must be finite and non-negative");
        e[i] = s;
        total += s;
    }
    if (total == 0.0) return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    return e / total;
}

Eigen::MatrixXd transition_matrix(const CausalGraph& graph, const Eigen::VectorXd& restart_dist) {
    const auto n = static_cast<Eigen::Index>(graph.node_count());
    if (restart_dist.size() != n) throw Error("anomaly scores must cover every node");
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto causes = graph.parents(static_cast<NodeId>(i));
        if (causes.empty()) {
            p.row(i) = restart_dist.transpose();
            continue;
        }
        const double w = 1.0 / static_cast<double>(causes.size());
        for (NodeId c : causes) p(i, static_cast<Eigen::Index>(c)) = w;
    }
    return p;
}

Ranking rwr_rank(const CausalGraph& graph, const std::vector<double>& anomaly_scores, double restart) {
    check_restart(restart);
    if (anomaly_scores.size() != graph.node_count()) throw Error("anomaly scores must cover every node");
    const Eigen::VectorXd e = restart_distribution(anomaly_scores);
    const Eigen::MatrixXd pt = transition_matrix(graph, e).transpose();
    Eigen::VectorXd x = e;
    constexpr int kMaxIterations = 1'000'000;
    for (int it = 0; it < kMaxIterations; ++it) {
        Eigen::VectorXd next = (1.0 - restart) * (pt * x) + restart * e;
        const double residual = (next - x).lpNorm<1>();
        x = std::move(next);
        if (residual < kResidualTolerance) break;
    }
    x /= x.sum();
    return to_ranking(x);
}

Eigen::VectorXd rwr_direct_solve(const CausalGraph& graph, const std::vector<double>& anomaly_scores,
                                 double restart) {
    check_restart(restart);
    const Eigen::VectorXd e = restart_distribution(anomaly_scores);
    const Eigen::MatrixXd p = transition_matrix(graph, e);
    const auto n = p.rows();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - (1.0 - restart) * p.transpose();
    return a.partialPivLu().solve(restart * e);
}

double precision_at(const Ranking& ranking, const std::set<NodeId>& truth, std::size_t j) {
    if (truth.empty()) throw Error("fault has no true root cause");
    std::size_t hits = 0;
    for (std::size_t pos = 0; pos < j && pos < ranking.order.size(); ++pos) hits += truth.count(ranking.order[pos]);
    return static_cast<double>(hits) / static_cast<double>(std::min(j, truth.size()));
}

double map_at_k(const std::vector<EvaluatedCase>& cases, std::size_t k) {
    if (cases.empty()) throw Error("MAP@K needs at least one fault");
    if (k == 0) throw Error("MAP@K needs K >= 1");
    double total = 0.0;
    for (const auto& c : cases) {
        double sum = 0.0;
        for (std::size_t j = 1; j <= k; ++j) sum += precision_at(c.ranking, c.truth, j);
        total += sum / static_cast<double>(k);
    }
    return total / static_cast<double>(cases.size());
}

std::size_t first_hit_rank(const EvaluatedCase& c) {
    for (std::size_t pos = 0; pos < c.ranking.order.size(); ++pos) {
        if (c.truth.count(c.ranking.order[pos])) return pos + 1;
    }
    return 0;
}

double mrr(const std::vector<EvaluatedCase>& cases) {
    if (cases.empty()) throw Error("MRR needs at least one fault");
    double total = 0.0;
    for (const auto& c : cases) {
        const std::size_t r = first_hit_rank(c);
        if (r) total += 1.0 / static_cast<double>(r);
    }
    return total / static_cast<double>(cases.size());
}

}  // namespace matmcd::rca
