#include <gtest/gtest.h>

#include <random>

#include "matmcd/da/rag.hpp"
#include "matmcd/graph/metrics.hpp"
#include "matmcd/llm/backends.hpp"
#include "matmcd/pipeline/config.hpp"
#include "matmcd/pipeline/pipeline.hpp"
#include "matmcd/pipeline/refiner.hpp"
#include "matmcd/scd/direct_lingam.hpp"
#include "matmcd/util/error.hpp"
#include "synthetic.hpp"

using namespace matmcd;
using namespace matmcd::pipeline;

namespace {

constexpr NodeId A = 0, B = 1, C = 2, D = 3, E = 4, F = 5;

PipelineConfig config_for(Engine e) {
    PipelineConfig c;
    c.engine = e;
    c.alpha = 0.01;
    c.backend = BackendMode::Scripted;
    if (e == Engine::DirectLingam) c.soft_weight = kHardConstraintWeight;
    return c;
}

class EchoTool : public da::SearchTool {
public:
    std::vector<da::Document> fetch(const std::string& query) override {
        return {{"notes:" + query, "Notes about " + query + " and how the variables relate.", false}};
    }
    std::string name() const override { return "echo"; }
};

}  // namespace

TEST(ResolveConflicts, DemotesWeakestEdgeOfCycle) {
    ConstraintMatrix c(3);
    c.require(A, B, 0.9);
    c.require(B, C, 0.8);
    c.require(C, A, 0.7);
    const auto r = resolve_conflicts_detailed(c);
    ASSERT_EQ(r.demotions.size(), 1u);
    EXPECT_EQ(r.demotions[0].from, C);
    EXPECT_EQ(r.demotions[0].to, A);
    EXPECT_EQ(r.demotions[0].reason, "cycle");
    EXPECT_TRUE(r.constraints.is_required(A, B));
    EXPECT_TRUE(r.constraints.is_required(B, C));
    EXPECT_EQ(r.constraints.at(C, A), EdgeConstraint::Unknown);
    EXPECT_EQ(resolve_conflicts(c), r.constraints);
}

TEST(ResolveConflicts, TwoDisjointCyclesTwoDemotions) {
    ConstraintMatrix c(6);
    c.require(A, B, 0.9);
    c.require(B, C, 0.5);
    c.require(C, A, 0.8);
    c.require(D, E, 0.4);
    c.require(E, F, 0.6);
    c.require(F, D, 0.7);
    const auto r = resolve_conflicts_detailed(c);
    ASSERT_EQ(r.demotions.size(), 2u);
    EXPECT_TRUE(find_cycle(r.constraints.required_graph()) == std::nullopt);
    EXPECT_EQ(r.constraints.at(B, C), EdgeConstraint::Unknown);
    EXPECT_EQ(r.constraints.at(D, E), EdgeConstraint::Unknown);
}

TEST(ResolveConflicts, EqualConfidenceDemotesSmallestEdge) {
    ConstraintMatrix c(3);
    c.require(A, B, 0.5);
    c.require(B, C, 0.5);
    c.require(C, A, 0.5);
    const auto r = resolve_conflicts_detailed(c);
    ASSERT_EQ(r.demotions.size(), 1u);
    EXPECT_EQ(std::make_pair(r.demotions[0].from, r.demotions[0].to), std::make_pair(A, B));
}

TEST(ResolveConflicts, ForbiddenEntriesUntouched) {
    ConstraintMatrix c(3);
    c.forbid(A, B, 0.2);
    c.require(B, C, 0.3);
    const auto r = resolve_conflicts_detailed(c);
    EXPECT_TRUE(r.demotions.empty());
    EXPECT_EQ(r.constraints, c);
}

TEST(ResolveConflicts, ParentCapDemotesLeastConfident) {
    ConstraintMatrix c(4);
    c.require(A, D, 0.9);
    c.require(B, D, 0.4);
    c.require(C, D, 0.4);
    const auto r = resolve_conflicts_detailed(c, 2);
    ASSERT_EQ(r.demotions.size(), 1u);
    EXPECT_EQ(r.demotions[0].from, C);
    EXPECT_EQ(r.demotions[0].reason, "max_parents");
    EXPECT_TRUE(r.constraints.is_required(B, D));
}

TEST(ResolveConflicts, RandomMatricesBecomeAcyclic) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 200; ++t) {
        const auto c = synth::random_constraints(6, 0.3, 0.2, rng);
        const auto r = resolve_conflicts_detailed(c, 2);
        EXPECT_TRUE(is_dag(r.constraints.required_graph()));
        for (NodeId v = 0; v < 6; ++v) EXPECT_LE(r.constraints.required_graph().parents(v).size(), 2u);
        EXPECT_EQ(r.constraints.forbidden_edges(), c.forbidden_edges());
    }
}

TEST(Refiner, AllUnknownReproducesInitialGraph) {
    std::mt19937_64 rng(10);
    const auto dag = synth::random_dag(5, 0.4, rng);
    for (auto e : {Engine::Pc, Engine::ExactSearch, Engine::DirectLingam}) {
        const auto data = synth::linear_sem(dag, 1000, 77, synth::Noise::Uniform);
        const auto cfg = config_for(e);
        EXPECT_EQ(refine_graph(data, ConstraintMatrix(5), cfg), run_engine(data, ConstraintMatrix(5), cfg))
            << to_string(e);
    }
}

TEST(Refiner, ConstraintComplianceAcrossEngines) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 15; ++t) {
        const auto dag = synth::random_dag(5, 0.4, rng);
        const auto data = synth::linear_sem(dag, 500, 400 + t, synth::Noise::Uniform);
        const auto raw = synth::random_constraints(5, 0.15, 0.2, rng);
        for (auto e : {Engine::Pc, Engine::ExactSearch, Engine::DirectLingam}) {
            const auto cfg = config_for(e);
            const auto cap = e == Engine::ExactSearch ? std::optional<std::size_t>(2) : std::nullopt;
            const auto c = resolve_conflicts_detailed(raw, cap).constraints;
            const auto g = refine_graph(data, c, cfg);
            EXPECT_TRUE(is_dag(g)) << to_string(e);
            EXPECT_TRUE(synth::satisfies(g, c)) << to_string(e) << " trial " << t;
        }
    }
}

TEST(Refiner, RejectsWrongDimension) {
    const auto data = synth::independent_noise(3, 100, 1);
    EXPECT_THROW(refine_graph(data, ConstraintMatrix(4), config_for(Engine::Pc)), Error);
}

TEST(Config, ParsersAndValidation) {
    EXPECT_EQ(parse_engine("PC"), Engine::Pc);
    EXPECT_EQ(parse_engine("es"), Engine::ExactSearch);
    EXPECT_EQ(parse_engine("DirectLiNGAM"), Engine::DirectLingam);
    EXPECT_THROW(parse_engine("ges"), Error);
    EXPECT_EQ(parse_backend("replay"), BackendMode::Replay);
    EXPECT_EQ(parse_tool("corpus"), ToolKind::Corpus);
    PipelineConfig c;
    c.backend = BackendMode::Replay;
    EXPECT_THROW(c.validate(), Error);
    c.cassette = "x.json";
    EXPECT_NO_THROW(c.validate());
    c.alpha = 1.5;
    EXPECT_THROW(c.validate(), Error);
}

class PipelineRun : public ::testing::Test {
protected:
    CausalGraph truth{4};
    Dataset data;
    void SetUp() override {
        truth.add_edge(0, 2, 1.0);
        truth.add_edge(1, 2, -1.0);
        truth.add_edge(2, 3, 0.8);
        data = synth::linear_sem(truth, 1500, 5, synth::Noise::Uniform, {"a", "b", "c", "d"}, "toy");
    }

    RunReport run(Engine e, bool with_tool, llm::ChatGateway& gw) {
        EchoTool tool;
        Services s{&gw, with_tool ? &tool : nullptr, da::HashingEmbedder(256)};
        return run_pipeline(data, truth, config_for(e), s);
    }
};

TEST_F(PipelineRun, OracleAgentNeverHurts) {
    for (auto e : {Engine::Pc, Engine::ExactSearch, Engine::DirectLingam}) {
        auto backend = std::make_shared<llm::ScriptedBackend>(
            synth::oracle_responder(truth, data.meta, {{"toy dataset", "toy variables a b c d"}, {}, 0.9}));
        llm::ChatGateway gw(backend, "m");
        const auto report = run(e, true, gw);
        ASSERT_TRUE(report.initial_metrics && report.refined_metrics);
        EXPECT_LE(report.refined_metrics->shd, report.initial_metrics->shd) << to_string(e);
        EXPECT_EQ(report.refined_graph.edges(), truth.edges()) << to_string(e);
        EXPECT_EQ(report.provenance.queries.size(), 2u);
        EXPECT_EQ(report.provenance.search.tool_calls, 2u);
        EXPECT_EQ(report.provenance.decisions.size(), 12u);
        EXPECT_EQ(report.context.summary_of("a"), "a is one of the measured quantities.");
        EXPECT_EQ(report.initial_cpdag.has_value(), e == Engine::Pc);
    }
}

TEST_F(PipelineRun, NoToolMeansEmptyContextAndNoSearchCalls) {
    auto backend = std::make_shared<llm::ScriptedBackend>(synth::oracle_responder(truth, data.meta));
    llm::ChatGateway gw(backend, "m");
    const auto report = run(Engine::ExactSearch, false, gw);
    EXPECT_EQ(report.context.dataset_summary, da::kNoInformation);
    for (const auto& call : report.provenance.calls) {
        EXPECT_TRUE(call.tag == "knowledge" || call.tag == "constraint") << call.tag;
    }
}

TEST_F(PipelineRun, ReportJsonIsDeterministic) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
        auto backend = std::make_shared<llm::ScriptedBackend>(
            synth::oracle_responder(truth, data.meta, {{"toy dataset"}, {}, 0.8}));
        llm::ChatGateway gw(backend, "m");
        const auto doc = report_to_json(run(Engine::Pc, true, gw));
        EXPECT_FALSE(doc.contains("timings_ms"));
        EXPECT_EQ(doc["schema_version"], kReportSchemaVersion);
        if (rep == 0) first = doc.dump(2);
        else EXPECT_EQ(doc.dump(2), first);
    }
}

TEST_F(PipelineRun, StageFailureNamesTheStage) {
    auto backend = std::make_shared<llm::ScriptedBackend>();  // no responses at all
    llm::ChatGateway gw(backend, "m");
    try {
        run(Engine::Pc, false, gw);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        EXPECT_EQ(e.stage(), "cc_agent");
    }
}

TEST_F(PipelineRun, DiscoveryOnlyMakesNoCalls) {
    const auto report = run_discovery(data, truth, config_for(Engine::DirectLingam));
    EXPECT_EQ(report.stage, "discover");
    EXPECT_TRUE(report.provenance.calls.empty());
    EXPECT_EQ(report.refined_graph, report.initial_graph);
}
