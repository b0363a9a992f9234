#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matmcd/da/rag.hpp"
#include "matmcd/da/screening.hpp"
#include "matmcd/da/tools.hpp"
#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/llm/gateway.hpp"

namespace matmcd::da {

/// Calling-history memory of the search loop.
class QueryMemory {
public:
    /// Lowercase, whitespace collapsed, trailing punctuation stripped.
    static std::string normalize(std::string_view query);

    bool contains(std::string_view query) const;
    /// False (and no change) when the normalized query is already stored.
    bool add(const std::string& query);

    /// Normalized queries, in issue order.
    const std::vector<std::string>& queries() const noexcept { return normalized_; }
    /// Queries as the model wrote them.
    const std::vector<std::string>& issued() const noexcept { return issued_; }
    std::size_t size() const noexcept { return normalized_.size(); }

private:
    std::vector<std::string> normalized_;
    std::vector<std::string> issued_;
};

/// Parsed Search LLM reply: a query, or nullopt for the termination phrase.
struct SearchReply {
    std::optional<std::string> query;
};

/// nullopt when the reply holds neither a "Search Query:" line nor the
/// termination phrase.
std::optional<SearchReply> parse_search_reply(std::string_view content);

std::string render_search_prompt(const MetaData& meta, const QueryMemory& memory);

/// Next query, or nullopt (DONE). A query already in memory earns one re-ask;
/// a second repeat ends the search.
std::optional<std::string> next_query(llm::ChatGateway& gateway, const MetaData& meta, const QueryMemory& memory);

struct SearchLoopOptions {
    int max_iterations = 8;
    std::size_t chunk_chars = kDefaultChunkChars;
    std::size_t overlap_chars = kDefaultOverlapChars;
    Blocklist blocklist;
};

struct SearchLoopResult {
    std::vector<RetrievedChunk> chunks;
    QueryMemory memory;
    std::size_t tool_calls = 0;
    std::size_t documents_kept = 0;
    std::size_t documents_dropped = 0;
    std::vector<std::string> warnings;
};

/// Query -> fetch -> screen -> chunk -> index until DONE or the iteration cap.
/// Tool failures are recorded as warnings and the loop goes on.
SearchLoopResult run_search_loop(llm::ChatGateway& gateway, const MetaData& meta, SearchTool& tool,
                                 const llm::Embedder& embedder, const SearchLoopOptions& options = {});

}  // namespace matmcd::da
