#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "matmcd/da/summary.hpp"
#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/llm/gateway.hpp"
#include "matmcd/scd/constraint_matrix.hpp"

namespace matmcd::cc {

enum class Conclusion { Yes, No, Unknown };

const char* to_string(Conclusion c);

struct Guess {
    std::string rationale;
    Conclusion conclusion = Conclusion::Unknown;
    double confidence = 0.0;
};

struct GuessSet {
    std::vector<Guess> guesses;  // ordered by guess number
};

struct PairDecision {
    NodeId from = 0;
    NodeId to = 0;
    Conclusion conclusion = Conclusion::Unknown;
    double confidence = 0.0;
    std::string explanation;
};

/// Knowledge LLM prompt for the ordered pair (i, j). A variable without a
/// summary gets the placeholder text and a line in `warnings`.
std::string render_pair_prompt(const CausalGraph& g0, const MetaData& meta, std::pair<NodeId, NodeId> pair,
                               const da::ContextBundle& context, const std::string& algo_name,
                               std::vector<std::string>* warnings = nullptr);

/// Free-text explanation from the Knowledge LLM, returned as received.
std::string explain_pair(llm::ChatGateway& gateway, const std::string& prompt);

std::string render_constraint_prompt(const MetaData& meta, std::pair<NodeId, NodeId> pair,
                                     const std::string& explanation, int k);

/// G1..GK / P1..PK blocks. The conclusion is the last <Yes>/<No> marker of
/// a G block (a bare yes/no word when no bracketed marker exists);
/// probabilities are clamped to [0, 1], "80%" reads as 0.8. Blocks numbered
/// above K are ignored. Throws ParseError when no block is well formed.
GuessSet parse_topk_guesses(std::string_view content, int k);

/// Index of the most confident guess; ties keep the earlier guess.
std::size_t most_confident(const GuessSet& set);

/// Constraint LLM around `explanation`. When every attempt is malformed the
/// decision is Unknown with confidence 0.
PairDecision decide_pair(llm::ChatGateway& gateway, const MetaData& meta, const std::string& explanation,
                         std::pair<NodeId, NodeId> pair, int k);

/// Yes -> Required, No -> Forbidden, Unknown -> no constraint. Of a mutual
/// Required pair only the more confident direction survives (equal
/// confidence keeps the lexicographically smaller pair). Throws on a
/// duplicate ordered pair or a self pair.
ConstraintMatrix assemble_constraint_matrix(const std::vector<PairDecision>& decisions, std::size_t n);

/// Two-stage prompting for every ordered pair (i, j), i != j, in row-major order.
std::vector<PairDecision> run_cc_agent(llm::ChatGateway& gateway, const CausalGraph& g0, const MetaData& meta,
                                       const da::ContextBundle& context, const std::string& algo_name, int k,
                                       std::vector<std::string>* warnings = nullptr);

}  // namespace matmcd::cc
