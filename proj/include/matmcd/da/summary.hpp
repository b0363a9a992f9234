#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "matmcd/da/rag.hpp"
#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/llm/gateway.hpp"

namespace matmcd::da {

inline constexpr std::string_view kNoInformation = "No information retrieved.";

/// The three cues handed to the CC-agent.
struct ContextBundle {
    std::string dataset_summary;
    std::map<std::string, std::string> variable_summaries;
    std::string relationship_notes;

    /// Placeholder text for every cue (the degraded, meta-data-only bundle).
    static ContextBundle empty(const MetaData& meta);
    /// Summary of `name`, or the placeholder.
    const std::string& summary_of(const std::string& name) const;
};

/// Reads "Dataset Summary:", "Summary of <name>:" and relationship sections.
/// Missing cues get the placeholder. Throws ParseError when neither a dataset
/// summary nor any variable summary is found.
ContextBundle parse_summary_reply(std::string_view content, const MetaData& meta);

/// Section queries used for retrieval: the dataset, each variable, relationships.
std::vector<std::string> section_queries(const MetaData& meta);

/// Union of the top `per_section_k` chunks of each section query, in chunk-id order.
std::vector<RetrievedChunk> select_excerpts(const MetaData& meta, const std::vector<RetrievedChunk>& index,
                                            std::size_t per_section_k, const llm::Embedder& embedder);

std::string render_summary_prompt(const MetaData& meta, const std::vector<RetrievedChunk>& excerpts);

/// Summary LLM over the retrieved excerpts. An empty index yields
/// ContextBundle::empty without calling the model.
ContextBundle summarize_context(llm::ChatGateway& gateway, const MetaData& meta,
                                const std::vector<RetrievedChunk>& index, std::size_t per_section_k,
                                const llm::Embedder& embedder);

}  // namespace matmcd::da
