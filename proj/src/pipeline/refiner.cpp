#include "matmcd/pipeline/refiner.hpp"

#include <algorithm>
#include <tuple>

#include "matmcd/scd/direct_lingam.hpp"
#include "matmcd/scd/exact_search.hpp"
#include "matmcd/scd/orient.hpp"
#include "matmcd/scd/pc.hpp"
#include "matmcd/util/error.hpp"

namespace matmcd::pipeline {

ConstraintMatrix resolve_conflicts(const ConstraintMatrix& constraints) {
    return resolve_conflicts_detailed(constraints).constraints;
}

Resolution resolve_conflicts_detailed(const ConstraintMatrix& constraints, std::optional<std::size_t> max_parents) {
    Resolution r{constraints, {}};
    ConstraintMatrix& c = r.constraints;
    while (auto cycle = find_cycle(c.required_graph())) {
        Edge worst{0, 0};
        double worst_conf = 2.0;
        for (std::size_t k = 0; k + 1 < cycle->size(); ++k) {
            const Edge e{(*cycle)[k], (*cycle)[k + 1]};
            const double conf = c.confidence(e.first, e.second);
            if (conf < worst_conf || (conf == worst_conf && e < worst)) {
                worst = e;
                worst_conf = conf;
            }
        }
        r.demotions.push_back({worst.first, worst.second, worst_conf, "cycle"});
        c.clear(worst.first, worst.second);
    }
    if (max_parents) {
        for (NodeId child = 0; child < c.size(); ++child) {
            std::vector<std::pair<double, NodeId>> parents;
            for (NodeId p = 0; p < c.size(); ++p) {
                if (c.is_required(p, child)) parents.emplace_back(c.confidence(p, child), p);
            }
            if (parents.size() <= *max_parents) continue;
            std::sort(parents.begin(), parents.end(), [](const auto& a, const auto& b) {
                return std::tie(a.first, b.second) < std::tie(b.first, a.second);
            });
            for (std::size_t k = 0; k + *max_parents < parents.size(); ++k) {
                r.demotions.push_back({parents[k].second, child, parents[k].first, "max_parents"});
                c.clear(parents[k].second, child);
            }
        }
    }
    return r;
}

CausalGraph run_engine(const Dataset& data, const ConstraintMatrix& constraints, const PipelineConfig& config,
                       CausalGraph* cpdag) {
    switch (config.engine) {
        case Engine::Pc: {
            PcOptions opts;
            opts.alpha = config.alpha;
            opts.max_conditioning_size = config.max_conditioning_size;
            CausalGraph raw = pc_discover(data, constraints, opts);
            CausalGraph dag = orient_cpdag(raw, constraints);
            if (cpdag) *cpdag = std::move(raw);
            return dag;
        }
        case Engine::ExactSearch: {
            ExactSearchOptions opts;
            opts.max_parents = config.max_parents;
            return exact_search(data, constraints, opts).graph;
        }
        case Engine::DirectLingam: {
            DirectLingamOptions opts;
            opts.soft_weight = config.soft_weight;
            opts.weight_threshold = config.weight_threshold;
            return direct_lingam(data, constraints, opts).graph;
        }
    }
    throw Error("unhandled engine");
}

CausalGraph refine_graph(const Dataset& data, const ConstraintMatrix& constraints, const PipelineConfig& config) {
    if (constraints.size() != data.variable_count()) {
        throw Error("constraint matrix is " + std::to_string(constraints.size()) + "x" +
                    std::to_string(constraints.size()) + " but the dataset has " +
                    std::to_string(data.variable_count()) + " variables");
    }
    CausalGraph g = run_engine(data, constraints, config);
    if (!is_dag(g)) throw Error("refined graph is not acyclic");
    return g;
}

}  // namespace matmcd::pipeline
