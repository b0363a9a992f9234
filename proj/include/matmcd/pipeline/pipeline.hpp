#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "matmcd/cc/cc_agent.hpp"
#include "matmcd/da/search.hpp"
#include "matmcd/da/summary.hpp"
#include "matmcd/graph/metrics.hpp"
#include "matmcd/llm/gateway.hpp"
#include "matmcd/pipeline/config.hpp"
#include "matmcd/pipeline/refiner.hpp"

namespace matmcd::pipeline {

inline constexpr int kReportSchemaVersion = 1;

struct SearchStats {
    std::size_t tool_calls = 0;
    std::size_t documents_kept = 0;
    std::size_t documents_dropped = 0;
    std::size_t chunks = 0;
};

struct Provenance {
    std::vector<std::string> queries;
    SearchStats search;
    std::vector<cc::PairDecision> decisions;
    std::vector<Demotion> demotions;
    std::vector<llm::CallRecord> calls;
    std::vector<std::string> warnings;
};

struct RunReport {
    std::string stage = "refine";  // "discover" for estimator-only runs
    MetaData meta;
    std::size_t sample_count = 0;
    PipelineConfig config;
    CausalGraph initial_graph;
    std::optional<CausalGraph> initial_cpdag;  // PC only
    da::ContextBundle context;
    ConstraintMatrix proposed_constraints;      // straight from the CC-agent
    ConstraintMatrix constraint_matrix;         // after conflict resolution
    CausalGraph refined_graph;
    std::optional<GraphMetrics> initial_metrics;
    std::optional<GraphMetrics> refined_metrics;
    Provenance provenance;
    std::vector<std::pair<std::string, double>> timings_ms;
};

/// Everything the agents need besides the data. `tool` may be null, which
/// skips the search loop and leaves the context bundle empty.
struct Services {
    llm::ChatGateway* gateway = nullptr;
    da::SearchTool* tool = nullptr;
    llm::Embedder embedder;
};

/// Estimator, DA-agent, CC-agent, conflict resolution and refinement.
/// Failures are rethrown as StageError naming the stage.
RunReport run_pipeline(const Dataset& data, const std::optional<CausalGraph>& truth, const PipelineConfig& config,
                       const Services& services);

/// Estimator-only run (no model calls).
RunReport run_discovery(const Dataset& data, const std::optional<CausalGraph>& truth, const PipelineConfig& config);

nlohmann::json metrics_to_json(const GraphMetrics& m);
nlohmann::json constraints_to_json(const ConstraintMatrix& c, const MetaData& meta);
nlohmann::json config_to_json(const PipelineConfig& config);
/// Report document. Timings make the bytes run-dependent, so they are opt-in.
nlohmann::json report_to_json(const RunReport& report, bool include_timings = false);

/// Builds the backend chosen by the config (replay/record open the cassette).
std::shared_ptr<llm::ChatBackend> make_backend(const PipelineConfig& config);

}  // namespace matmcd::pipeline
