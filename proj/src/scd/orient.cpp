#include "matmcd/scd/orient.hpp"

#include "matmcd/util/error.hpp"

namespace matmcd {

CausalGraph orient_cpdag(const CausalGraph& cpdag, const ConstraintMatrix& constraints) {
    const std::size_t n = cpdag.node_count();
    if (constraints.size() != n) throw Error("constraint matrix size does not match the graph");
    CausalGraph dag(n, GraphMode::Dag);

    const auto allowed = [&](NodeId from, NodeId to) { return !constraints.is_forbidden(from, to); };
    const auto place = [&](NodeId from, NodeId to) {
        if (allowed(from, to) && !creates_cycle(dag, from, to)) {
            dag.add_edge(from, to, cpdag.weight(from, to));
            return true;
        }
        if (allowed(to, from) && !constraints.is_required(from, to) && !creates_cycle(dag, to, from)) {
            dag.add_edge(to, from, cpdag.weight(to, from));
            return true;
        }
        return false;
    };

    for (const auto& [from, to] : cpdag.edges()) {
        if (!constraints.is_required(from, to)) continue;
        if (creates_cycle(dag, from, to)) {
            throw InfeasibleConstraints("required edges " + std::to_string(from) + "->" + std::to_string(to) +
                                        " close a cycle; no acyclic completion exists");
        }
        dag.add_edge(from, to, cpdag.weight(from, to));
    }
    for (const auto& [from, to] : cpdag.edges()) {
        if (cpdag.has_edge(to, from) || dag.adjacent(from, to)) continue;
        place(from, to);
    }
    for (const auto& [a, b] : cpdag.edges()) {
        if (a > b || !cpdag.has_edge(b, a) || dag.adjacent(a, b)) continue;
        bool forward;
        if (constraints.is_required(b, a)) {
            forward = false;
        } else if (!allowed(a, b) && allowed(b, a)) {
            forward = false;
        } else if (allowed(a, b) && !allowed(b, a)) {
            forward = true;
        } else if (constraints.confidence(a, b) != constraints.confidence(b, a) &&
                   constraints.at(a, b) == constraints.at(b, a)) {
            forward = constraints.confidence(a, b) > constraints.confidence(b, a);
        } else {
            forward = true;
        }
        if (forward) {
            place(a, b);
        } else {
            place(b, a);
        }
    }
    return dag;
}

}  // namespace matmcd
