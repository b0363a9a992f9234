#include "matmcd/scd/pc.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "matmcd/scd/fisher_z.hpp"
#include "matmcd/util/error.hpp"

namespace matmcd {

namespace {

using AdjSets = std::vector<std::set<NodeId>>;

// Calls fn(subset) for every size-k subset of `pool`, in lexicographic order,
// until fn returns true.
template <typename Fn>
bool for_each_subset(const std::vector<NodeId>& pool, std::size_t k, Fn&& fn) {
    if (k > pool.size()) return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<NodeId> subset(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (fn(subset)) return true;
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == pool.size() - k + pos - 1) --pos;
        if (pos == 0) return false;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
}

class Orienter {
public:
    Orienter(CausalGraph& g, const ConstraintMatrix& c) : g_(g), c_(c) {}

    bool undirected(NodeId a, NodeId b) const { return g_.is_undirected(a, b); }
    bool directed(NodeId a, NodeId b) const { return g_.has_edge(a, b) && !g_.has_edge(b, a); }
    bool adjacent(NodeId a, NodeId b) const { return g_.adjacent(a, b); }

    bool allowed(NodeId from, NodeId to) const { return !c_.is_forbidden(from, to) && !c_.is_required(to, from); }

    // Orients an undirected edge from -> to when the constraints allow it.
    bool orient(NodeId from, NodeId to) {
        if (!undirected(from, to) || !allowed(from, to)) return false;
        g_.remove_edge(to, from);
        return true;
    }

private:
    CausalGraph& g_;
    const ConstraintMatrix& c_;
};

}  // namespace

CausalGraph pc_discover(const Dataset& data, const PcOptions& options) {
    return pc_discover(data, ConstraintMatrix(data.variable_count()), options);
}

CausalGraph pc_discover(const Dataset& data, const ConstraintMatrix& constraints, const PcOptions& options) {
    data.validate();
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw Error("PC alpha must lie in (0, 1)");
    const std::size_t n = data.variable_count();
    if (constraints.size() != n) throw Error("constraint matrix size does not match the dataset");

    const FisherZTest test(data);
    const auto must_keep = [&](NodeId a, NodeId b) { return constraints.is_required(a, b) || constraints.is_required(b, a); };

    AdjSets adj(n);
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = 0; b < n; ++b) {
            if (a == b) continue;
            const bool excluded = constraints.is_forbidden(a, b) && constraints.is_forbidden(b, a);
            if (!excluded || must_keep(a, b)) adj[a].insert(b);
        }
    }

    std::map<Edge, std::vector<NodeId>> sepsets;
    for (std::size_t level = 0; level <= options.max_conditioning_size; ++level) {
        if (test.sample_count() < level + 4) break;
        const AdjSets frozen = adj;
        bool testable = false;
        for (NodeId a = 0; a < n; ++a) {
            for (NodeId b : frozen[a]) {
                if (!adj[a].count(b) || must_keep(a, b)) continue;
                std::vector<NodeId> pool;
                for (NodeId c : frozen[a]) {
                    if (c != b) pool.push_back(c);
                }
                if (pool.size() < level) continue;
                testable = true;
                for_each_subset(pool, level, [&](const std::vector<NodeId>& cond) {
                    if (!test(a, b, cond, options.alpha).independent) return false;
                    adj[a].erase(b);
                    adj[b].erase(a);
                    sepsets[{std::min(a, b), std::max(a, b)}] = cond;
                    return true;
                });
            }
        }
        if (!testable) break;
    }

    CausalGraph g(n, GraphMode::Cpdag);
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b : adj[a]) g.add_edge(a, b);
    }
    Orienter o(g, constraints);

    // Background knowledge first.
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = 0; b < n; ++b) {
            if (a == b || !o.undirected(a, b)) continue;
            if (constraints.is_required(a, b)) {
                g.remove_edge(b, a);
            } else if (constraints.is_forbidden(a, b) && !constraints.is_forbidden(b, a)) {
                g.remove_edge(a, b);
            }
        }
    }

    // Unshielded colliders a -> k <- b with k outside sepset(a, b).
    for (NodeId k = 0; k < n; ++k) {
        for (NodeId a = 0; a < n; ++a) {
            for (NodeId b = a + 1; b < n; ++b) {
                if (a == k || b == k) continue;
                if (!adj[k].count(a) || !adj[k].count(b) || o.adjacent(a, b)) continue;
                const auto it = sepsets.find({a, b});
                const bool in_sepset = it != sepsets.end() &&
                                       std::find(it->second.begin(), it->second.end(), k) != it->second.end();
                if (in_sepset) continue;
                o.orient(a, k);
                o.orient(b, k);
            }
        }
    }

    // Meek rules R1-R3 until fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId b = 0; b < n; ++b) {
            for (NodeId c = 0; c < n; ++c) {
                if (b == c || !o.undirected(b, c)) continue;
                bool apply = false;
                // R1: a -> b - c, a and c non-adjacent.
                for (NodeId a = 0; a < n && !apply; ++a) {
                    if (a != c && o.directed(a, b) && !o.adjacent(a, c)) apply = true;
                }
                // R2: b -> m -> c with b - c.
                for (NodeId m = 0; m < n && !apply; ++m) {
                    if (o.directed(b, m) && o.directed(m, c)) apply = true;
                }
                // R3: b - x -> c, b - y -> c, x and y non-adjacent.
                for (NodeId x = 0; x < n && !apply; ++x) {
                    if (x == c || !o.undirected(b, x) || !o.directed(x, c)) continue;
                    for (NodeId y = x + 1; y < n && !apply; ++y) {
                        if (y == c || !o.undirected(b, y) || !o.directed(y, c)) continue;
                        if (!o.adjacent(x, y)) apply = true;
                    }
                }
                if (apply && o.orient(b, c)) changed = true;
            }
        }
    }
    return g;
}

}  // namespace matmcd
