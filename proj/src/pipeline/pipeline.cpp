#include "matmcd/pipeline/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <type_traits>

#include "matmcd/graph/graph_io.hpp"
#include "matmcd/llm/backends.hpp"
#include "matmcd/llm/cassette.hpp"
#include "matmcd/prompt/templates.hpp"
#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
auto stage(const char* name, std::vector<std::pair<std::string, double>>& timings, F&& body) {
    const auto start = Clock::now();
    auto finish = [&] {
        timings.emplace_back(name, std::chrono::duration<double, std::milli>(Clock::now() - start).count());
    };
    try {
        if constexpr (std::is_void_v<decltype(body())>) {
            body();
            finish();
        } else {
            auto out = body();
            finish();
            return out;
        }
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

void fill_metrics(RunReport& report, const std::optional<CausalGraph>& truth) {
    if (!truth) return;
    if (truth->node_count() != report.initial_graph.node_count()) {
        throw Error("truth graph has " + std::to_string(truth->node_count()) + " nodes, dataset has " +
                    std::to_string(report.initial_graph.node_count()));
    }
    report.initial_metrics = confusion_metrics(report.initial_graph, *truth);
    report.refined_metrics = confusion_metrics(report.refined_graph, *truth);
}

nlohmann::json decision_to_json(const cc::PairDecision& d, const MetaData& meta) {
    return {{"from", meta.names.at(d.from)},
            {"to", meta.names.at(d.to)},
            {"conclusion", cc::to_string(d.conclusion)},
            {"confidence", d.confidence},
            {"explanation", d.explanation}};
}

}  // namespace

RunReport run_discovery(const Dataset& data, const std::optional<CausalGraph>& truth, const PipelineConfig& config) {
    config.validate(false);
    data.validate();
    RunReport report;
    report.stage = "discover";
    report.meta = data.meta;
    report.sample_count = data.sample_count();
    report.config = config;
    const std::size_t n = data.variable_count();
    report.proposed_constraints = ConstraintMatrix(n);
    report.constraint_matrix = ConstraintMatrix(n);
    report.context = da::ContextBundle::empty(data.meta);
    report.initial_graph = stage("estimator", report.timings_ms, [&] {
        CausalGraph cpdag;
        CausalGraph g = run_engine(data, ConstraintMatrix(n), config, &cpdag);
        if (config.engine == Engine::Pc) report.initial_cpdag = std::move(cpdag);
        return g;
    });
    report.refined_graph = report.initial_graph;
    fill_metrics(report, truth);
    return report;
}

RunReport run_pipeline(const Dataset& data, const std::optional<CausalGraph>& truth, const PipelineConfig& config,
                       const Services& services) {
    if (!services.gateway) throw Error("pipeline needs a chat gateway");
    config.validate();
    data.validate();
    const MetaData& meta = data.meta;
    const std::size_t n = data.variable_count();

    RunReport report;
    report.meta = meta;
    report.sample_count = data.sample_count();
    report.config = config;
    auto& timings = report.timings_ms;
    auto& prov = report.provenance;

    report.initial_graph = stage("estimator", timings, [&] {
        CausalGraph cpdag;
        CausalGraph g = run_engine(data, ConstraintMatrix(n), config, &cpdag);
        if (config.engine == Engine::Pc) report.initial_cpdag = std::move(cpdag);
        return g;
    });

    report.context = stage("da_agent", timings, [&] {
        if (!config.da_agent || !services.tool) return da::ContextBundle::empty(meta);
        if (!services.embedder) throw Error("DA-agent needs an embedder");
        da::SearchLoopOptions opts;
        opts.max_iterations = config.max_iterations;
        opts.chunk_chars = config.chunk_chars;
        opts.overlap_chars = config.overlap_chars;
        if (!config.blocklist.empty()) opts.blocklist = da::Blocklist::load(config.blocklist);
        opts.blocklist.add_default_leak_rules(meta.title);
        auto loop = da::run_search_loop(*services.gateway, meta, *services.tool, services.embedder, opts);
        prov.queries = loop.memory.issued();
        prov.search = {loop.tool_calls, loop.documents_kept, loop.documents_dropped, loop.chunks.size()};
        prov.warnings.insert(prov.warnings.end(), loop.warnings.begin(), loop.warnings.end());
        return da::summarize_context(*services.gateway, meta, loop.chunks, config.per_section_k, services.embedder);
    });

    prov.decisions = stage("cc_agent", timings, [&] {
        return cc::run_cc_agent(*services.gateway, report.initial_graph, meta, report.context,
                                display_name(config.engine), config.k, &prov.warnings);
    });

    stage("constraints", timings, [&] {
        report.proposed_constraints = cc::assemble_constraint_matrix(prov.decisions, n);
        const std::optional<std::size_t> cap =
            config.engine == Engine::ExactSearch ? std::optional<std::size_t>(config.max_parents) : std::nullopt;
        auto resolved = resolve_conflicts_detailed(report.proposed_constraints, cap);
        report.constraint_matrix = std::move(resolved.constraints);
        prov.demotions = std::move(resolved.demotions);
    });

    report.refined_graph =
        stage("refiner", timings, [&] { return refine_graph(data, report.constraint_matrix, config); });

    stage("metrics", timings, [&] { fill_metrics(report, truth); });
    prov.calls = services.gateway->calls();
    return report;
}

nlohmann::json metrics_to_json(const GraphMetrics& m) {
    return {{"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1},
            {"fpr", m.fpr},
            {"shd", m.shd},
            {"nhd", m.nhd},
            {"nhd_rounded", round_half_even(m.nhd, 2)},
            {"true_positives", m.true_positives},
            {"false_positives", m.false_positives},
            {"false_negatives", m.false_negatives},
            {"precision_degenerate", m.precision_degenerate},
            {"recall_degenerate", m.recall_degenerate},
            {"fpr_degenerate", m.fpr_degenerate}};
}

nlohmann::json constraints_to_json(const ConstraintMatrix& c, const MetaData& meta) {
    nlohmann::json cells = nlohmann::json::array();
    for (NodeId i = 0; i < c.size(); ++i) {
        for (NodeId j = 0; j < c.size(); ++j) {
            if (c.at(i, j) == EdgeConstraint::Unknown) continue;
            cells.push_back({{"from", meta.names.at(i)},
                             {"to", meta.names.at(j)},
                             {"value", to_string(c.at(i, j))},
                             {"confidence", c.confidence(i, j)}});
        }
    }
    return cells;
}

nlohmann::json config_to_json(const PipelineConfig& c) {
    nlohmann::json soft = c.soft_weight;
    if (std::isinf(c.soft_weight)) soft = "hard";
    return {{"engine", to_string(c.engine)},
            {"alpha", c.alpha},
            {"max_conditioning_size", c.max_conditioning_size},
            {"max_parents", c.max_parents},
            {"soft_weight", soft},
            {"weight_threshold", c.weight_threshold},
            {"k", c.k},
            {"max_iterations", c.max_iterations},
            {"seed", c.seed},
            {"backend", to_string(c.backend)},
            {"model", c.model},
            {"da_agent", c.da_agent},
            {"tool", to_string(c.tool)},
            {"chunk_chars", c.chunk_chars},
            {"overlap_chars", c.overlap_chars},
            {"per_section_k", c.per_section_k},
            {"log_cap", c.log_cap},
            {"embedding_dimension", c.embedding_dimension},
            {"embedder", c.embedder}};
}

nlohmann::json report_to_json(const RunReport& r, bool include_timings) {
    const MetaData& meta = r.meta;
    nlohmann::json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["stage"] = r.stage;
    doc["dataset"] = {{"title", meta.title}, {"variables", meta.names}, {"samples", r.sample_count}};
    doc["config"] = config_to_json(r.config);
    doc["initial_graph"] = graph_to_json(r.initial_graph, meta);
    if (r.initial_cpdag) doc["initial_cpdag"] = graph_to_json(*r.initial_cpdag, meta);
    doc["context"] = {{"dataset_summary", r.context.dataset_summary},
                      {"variable_summaries", r.context.variable_summaries},
                      {"relationship_notes", r.context.relationship_notes}};
    doc["constraints"] = {{"proposed", constraints_to_json(r.proposed_constraints, meta)},
                          {"resolved", constraints_to_json(r.constraint_matrix, meta)}};
    doc["refined_graph"] = graph_to_json(r.refined_graph, meta);
    if (r.initial_metrics && r.refined_metrics) {
        doc["metrics"] = {{"initial", metrics_to_json(*r.initial_metrics)},
                          {"refined", metrics_to_json(*r.refined_metrics)},
                          {"note", r.config.engine == Engine::Pc
                                       ? "PC graphs are scored after orienting the CPDAG into a DAG"
                                       : "graphs scored as returned by the engine"}};
    }

    nlohmann::json prov;
    prov["queries"] = r.provenance.queries;
    prov["search"] = {{"tool_calls", r.provenance.search.tool_calls},
                      {"documents_kept", r.provenance.search.documents_kept},
                      {"documents_dropped", r.provenance.search.documents_dropped},
                      {"chunks", r.provenance.search.chunks}};
    nlohmann::json decisions = nlohmann::json::array();
    for (const auto& d : r.provenance.decisions) decisions.push_back(decision_to_json(d, meta));
    prov["decisions"] = std::move(decisions);
    nlohmann::json demotions = nlohmann::json::array();
    for (const auto& d : r.provenance.demotions) {
        demotions.push_back({{"from", meta.names.at(d.from)},
                             {"to", meta.names.at(d.to)},
                             {"confidence", d.confidence},
                             {"reason", d.reason}});
    }
    prov["demotions"] = std::move(demotions);
    nlohmann::json calls = nlohmann::json::array();
    for (const auto& c : r.provenance.calls) {
        calls.push_back({{"tag", c.tag}, {"request_sha256", c.key}, {"temperature", c.temperature}});
    }
    prov["calls"] = std::move(calls);
    nlohmann::json templates = nlohmann::json::object();
    for (const auto& t : prompt::all_templates()) templates[std::string(t.name)] = llm::sha256_hex(std::string(t.text));
    prov["template_sha256"] = std::move(templates);
    prov["warnings"] = r.provenance.warnings;
    doc["provenance"] = std::move(prov);

    if (include_timings) {
        nlohmann::json t = nlohmann::json::object();
        for (const auto& [name, ms] : r.timings_ms) t[name] = ms;
        doc["timings_ms"] = std::move(t);
    }
    return doc;
}

std::shared_ptr<llm::ChatBackend> make_backend(const PipelineConfig& config) {
    llm::LiveBackendOptions live;
    live.base_url = config.base_url;
    live.api_key_env = config.api_key_env;
    switch (config.backend) {
        case BackendMode::Live:
            return std::make_shared<llm::LiveBackend>(live);
        case BackendMode::Replay:
            if (!std::filesystem::exists(config.cassette)) throw Error("cassette not found: " + config.cassette);
            return std::make_shared<llm::ReplayBackend>(std::make_shared<llm::Cassette>(config.cassette));
        case BackendMode::Record:
            return std::make_shared<llm::RecordingBackend>(std::make_shared<llm::LiveBackend>(live),
                                                           std::make_shared<llm::Cassette>(config.cassette));
        case BackendMode::Scripted:
            return std::make_shared<llm::ScriptedBackend>();
    }
    throw Error("unhandled backend mode");
}

}  // namespace matmcd::pipeline
