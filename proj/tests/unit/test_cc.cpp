#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "matmcd/cc/cc_agent.hpp"
#include "matmcd/llm/backends.hpp"
#include "matmcd/util/error.hpp"

using namespace matmcd;
using namespace matmcd::cc;

namespace {

const MetaData kAuto{"AutoMPG", {"Weight", "Displacement", "Mpg"}};

PairDecision dec(NodeId from, NodeId to, Conclusion c, double conf) { return {from, to, c, conf, ""}; }

}  // namespace

TEST(TopK, CanonicalBlocks) {
    const auto set = parse_topk_guesses(
        "G1: Heavier cars need more fuel, so <Yes>.\n"
        "P1: 0.85\n"
        "G2: Perhaps the effect is mediated, <No>\n"
        "P2: 0.15\n",
        2);
    ASSERT_EQ(set.guesses.size(), 2u);
    EXPECT_EQ(set.guesses[0].conclusion, Conclusion::Yes);
    EXPECT_DOUBLE_EQ(set.guesses[0].confidence, 0.85);
    EXPECT_EQ(set.guesses[1].conclusion, Conclusion::No);
    EXPECT_DOUBLE_EQ(set.guesses[1].confidence, 0.15);
    EXPECT_EQ(most_confident(set), 0u);
}

TEST(TopK, MarkdownPercentAndClamping) {
    const auto set = parse_topk_guesses(
        "**G1:** It could go either way, but <no>.\n**P1:** 80%\n"
        "**G2:** yes\n**P2:** 1.7\n"
        "G3: <Yes> P3: -0.2\n",
        3);
    ASSERT_EQ(set.guesses.size(), 3u);
    EXPECT_EQ(set.guesses[0].conclusion, Conclusion::No);
    EXPECT_DOUBLE_EQ(set.guesses[0].confidence, 0.8);
    EXPECT_EQ(set.guesses[1].conclusion, Conclusion::Yes);
    EXPECT_DOUBLE_EQ(set.guesses[1].confidence, 1.0);
    EXPECT_DOUBLE_EQ(set.guesses[2].confidence, 0.0);
}

TEST(TopK, LastMarkerWinsAndExtraBlocksIgnored) {
    const auto set = parse_topk_guesses("G1: <Yes> at first, on reflection <No>\nP1: 0.6\nG2: <Yes>\nP2: 0.9\n", 1);
    ASSERT_EQ(set.guesses.size(), 1u);
    EXPECT_EQ(set.guesses[0].conclusion, Conclusion::No);
    EXPECT_DOUBLE_EQ(set.guesses[0].confidence, 0.6);
}

TEST(TopK, MarkersInsideWordsAreNotMarkers) {
    const auto set = parse_topk_guesses("G1: see EPG1: value <Yes>\nP1: 0.7\n", 1);
    ASSERT_EQ(set.guesses.size(), 1u);
    EXPECT_DOUBLE_EQ(set.guesses[0].confidence, 0.7);
}

TEST(TopK, MalformedRepliesThrow) {
    EXPECT_THROW(parse_topk_guesses("I cannot tell.", 3), ParseError);
    EXPECT_THROW(parse_topk_guesses("G1: <Yes>\n", 3), ParseError);
    EXPECT_THROW(parse_topk_guesses("G1: maybe\nP1: 0.5", 3), ParseError);
    EXPECT_THROW(parse_topk_guesses("G1: <Yes>\nP1: 0.5", 0), Error);
}

TEST(TopK, TieKeepsEarlierGuess) {
    const auto set = parse_topk_guesses("G1: <No>\nP1: 0.5\nG2: <Yes>\nP2: 0.5\n", 2);
    EXPECT_EQ(most_confident(set), 0u);
}

TEST(DecidePair, PicksMostConfidentGuess) {
    auto backend = std::make_shared<llm::ScriptedBackend>();
    backend->push("constraint", "G1: <No>\nP1: 0.3\nG2: <Yes>\nP2: 0.7\nG3: <No>\nP3: 0.7\n");
    llm::ChatGateway gw(backend, "m");
    const auto d = decide_pair(gw, kAuto, "Weight drives fuel use.", {0, 2}, 3);
    EXPECT_EQ(d.conclusion, Conclusion::Yes);
    EXPECT_DOUBLE_EQ(d.confidence, 0.7);
    EXPECT_EQ(d.from, 0u);
    EXPECT_EQ(d.to, 2u);
}

TEST(DecidePair, ThreeMalformedRepliesGiveUnknown) {
    auto backend = std::make_shared<llm::ScriptedBackend>();
    for (int i = 0; i < 3; ++i) backend->push("constraint", "no idea");
    llm::ChatGateway gw(backend, "m");
    const auto d = decide_pair(gw, kAuto, "x", {0, 1}, 3);
    EXPECT_EQ(d.conclusion, Conclusion::Unknown);
    EXPECT_EQ(d.confidence, 0.0);
    EXPECT_EQ(gw.calls().size(), 3u);
}

TEST(Assemble, MapsConclusions) {
    const auto c = assemble_constraint_matrix(
        {dec(0, 1, Conclusion::Yes, 0.9), dec(1, 2, Conclusion::No, 0.6), dec(2, 0, Conclusion::Unknown, 0.0)}, 3);
    EXPECT_TRUE(c.is_required(0, 1));
    EXPECT_DOUBLE_EQ(c.confidence(0, 1), 0.9);
    EXPECT_TRUE(c.is_forbidden(1, 2));
    EXPECT_EQ(c.at(2, 0), EdgeConstraint::Unknown);
}

TEST(Assemble, MutualRequiredKeepsMoreConfidentDirection) {
    auto c = assemble_constraint_matrix({dec(0, 1, Conclusion::Yes, 0.6), dec(1, 0, Conclusion::Yes, 0.8)}, 2);
    EXPECT_FALSE(c.is_required(0, 1));
    EXPECT_TRUE(c.is_required(1, 0));
    c = assemble_constraint_matrix({dec(0, 1, Conclusion::Yes, 0.7), dec(1, 0, Conclusion::Yes, 0.7)}, 2);
    EXPECT_TRUE(c.is_required(0, 1));
    EXPECT_FALSE(c.is_required(1, 0));
}

TEST(Assemble, RejectsDuplicatesAndSelfPairs) {
    EXPECT_THROW(assemble_constraint_matrix({dec(0, 1, Conclusion::Yes, 1), dec(0, 1, Conclusion::No, 1)}, 2), Error);
    EXPECT_THROW(assemble_constraint_matrix({dec(1, 1, Conclusion::Yes, 1)}, 2), Error);
}

TEST(Assemble, IndependentOfDecisionOrder) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 50; ++t) {
        std::vector<PairDecision> ds;
        for (NodeId i = 0; i < 5; ++i) {
            for (NodeId j = 0; j < 5; ++j) {
                if (i == j) continue;
                const double r = u(rng);
                const auto concl = r < 0.4 ? Conclusion::Yes : r < 0.8 ? Conclusion::No : Conclusion::Unknown;
                ds.push_back(dec(i, j, concl, concl == Conclusion::Unknown ? 0.0 : std::round(u(rng) * 4) / 4));
            }
        }
        const auto ref = assemble_constraint_matrix(ds, 5);
        std::shuffle(ds.begin(), ds.end(), rng);
        EXPECT_EQ(assemble_constraint_matrix(ds, 5), ref);
    }
}

TEST(PairPrompt, StatesWhetherTheInitialGraphHasTheEdge) {
    CausalGraph g0(3);
    g0.add_edge(0, 2);
    auto ctx = da::ContextBundle::empty(kAuto);
    ctx.variable_summaries["Weight"] = "Mass of the car.";
    const auto yes = render_pair_prompt(g0, kAuto, {0, 2}, ctx, "PC");
    EXPECT_NE(yes.find("changes in Weight have a direct impact on Mpg"), std::string::npos);
    EXPECT_NE(yes.find("Weight: Mass of the car."), std::string::npos);
    EXPECT_NE(yes.find("Weight -> Mpg"), std::string::npos);
    const auto no = render_pair_prompt(g0, kAuto, {2, 0}, ctx, "PC");
    EXPECT_NE(no.find("changes in Mpg have no direct impact on Weight"), std::string::npos);

    da::ContextBundle sparse = ctx;
    sparse.variable_summaries.erase("Mpg");
    std::vector<std::string> warnings;
    const auto p = render_pair_prompt(g0, kAuto, {0, 2}, sparse, "PC", &warnings);
    EXPECT_NE(p.find("Mpg: No information retrieved."), std::string::npos);
    EXPECT_EQ(warnings.size(), 1u);
    EXPECT_THROW(render_pair_prompt(g0, kAuto, {1, 1}, ctx, "PC"), Error);
}

TEST(RunCcAgent, VisitsEveryOrderedPairInRowMajorOrder) {
    std::vector<std::string> knowledge_prompts;
    auto backend = std::make_shared<llm::ScriptedBackend>([&](const llm::ChatRequest& r) -> std::optional<std::string> {
        if (r.tag == "knowledge") {
            knowledge_prompts.push_back(r.user);
            return "Some reasoning.";
        }
        return "G1: <No>\nP1: 0.9\n";
    });
    llm::ChatGateway gw(backend, "m");
    const auto ds = run_cc_agent(gw, CausalGraph(3), kAuto, da::ContextBundle::empty(kAuto), "PC", 1);
    ASSERT_EQ(ds.size(), 6u);
    const std::vector<std::pair<NodeId, NodeId>> order{{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}};
    for (std::size_t i = 0; i < ds.size(); ++i) {
        EXPECT_EQ(std::make_pair(ds[i].from, ds[i].to), order[i]);
        EXPECT_EQ(ds[i].conclusion, Conclusion::No);
        EXPECT_EQ(ds[i].explanation, "Some reasoning.");
    }
    EXPECT_EQ(knowledge_prompts.size(), 6u);
    EXPECT_EQ(gw.calls().size(), 12u);
}
