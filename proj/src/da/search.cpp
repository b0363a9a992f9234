#include "matmcd/da/search.hpp"

#include <algorithm>
#include <cctype>

#include "matmcd/da/html.hpp"
#include "matmcd/prompt/template.hpp"
#include "matmcd/prompt/templates.hpp"
#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::da {

namespace {

constexpr std::string_view kDonePhrase = "no query needed";

// Lowercase words separated by single spaces; punctuation becomes a separator.
std::string phrase_form(std::string_view s) {
    std::string out;
    for (char c : s) {
        const auto u = static_cast<unsigned char>(c);
        out.push_back(std::isalnum(u) ? static_cast<char>(std::tolower(u)) : ' ');
    }
    return text::collapse_whitespace(out);
}

bool says_done(std::string_view s) {
    return (" " + phrase_form(s) + " ").find(" " + std::string(kDonePhrase) + " ") != std::string::npos;
}

std::string strip_wrappers(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), '*'), s.end());
    s = text::trim(s);
    while (s.size() >= 2) {
        const char a = s.front(), b = s.back();
        if ((a == '"' && b == '"') || (a == '\'' && b == '\'') || (a == '<' && b == '>') || (a == '`' && b == '`')) {
            s = text::trim(s.substr(1, s.size() - 2));
        } else {
            break;
        }
    }
    return s;
}

}  // namespace

std::string QueryMemory::normalize(std::string_view query) {
    std::string s = text::collapse_whitespace(text::to_lower(query));
    while (!s.empty() && std::ispunct(static_cast<unsigned char>(s.back()))) s.pop_back();
    return text::trim(s);
}

bool QueryMemory::contains(std::string_view query) const {
    const std::string n = normalize(query);
    return std::find(normalized_.begin(), normalized_.end(), n) != normalized_.end();
}

bool QueryMemory::add(const std::string& query) {
    if (contains(query)) return false;
    normalized_.push_back(normalize(query));
    issued_.push_back(query);
    return true;
}

std::optional<SearchReply> parse_search_reply(std::string_view content) {
    const auto lines = text::split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        line.erase(std::remove(line.begin(), line.end(), '*'), line.end());
        const std::size_t at = text::find_ci(line, "search query:");
        if (at == std::string::npos) continue;
        std::string query = strip_wrappers(line.substr(at + 13));
        for (std::size_t j = i + 1; query.empty() && j < lines.size(); ++j) query = strip_wrappers(lines[j]);
        if (query.empty() || query == "new query") continue;
        if (says_done(query)) return SearchReply{std::nullopt};
        return SearchReply{text::collapse_whitespace(query)};
    }
    if (says_done(content)) return SearchReply{std::nullopt};
    return std::nullopt;
}

std::string render_search_prompt(const MetaData& meta, const QueryMemory& memory) {
    std::vector<std::string> previous;
    for (std::size_t i = 0; i < memory.issued().size(); ++i) {
        previous.push_back(std::to_string(i + 1) + ". " + memory.issued()[i]);
    }
    return prompt::render(prompt::kSearchTemplate,
                          {{"dataset_name", meta.title},
                           {"node_names", text::join(meta.names, ", ")},
                           {"previous_queries", previous.empty() ? "None." : text::join(previous, "\n")}});
}

std::optional<std::string> next_query(llm::ChatGateway& gateway, const MetaData& meta, const QueryMemory& memory) {
    const auto valid = [](const std::string& content) { return parse_search_reply(content).has_value(); };
    llm::ChatRequest request;
    request.user = render_search_prompt(meta, memory);
    request.tag = "search";
    for (int ask = 0; ask < 2; ++ask) {
        const auto reply = parse_search_reply(gateway.retry_with_escalation(request, valid).content);
        if (!reply->query) return std::nullopt;
        if (!memory.contains(*reply->query)) return reply->query;
        request.user = render_search_prompt(meta, memory) + "\n\n" +
                       prompt::render(prompt::kSearchRepeatNotice, {{"repeated_query", *reply->query}});
    }
    return std::nullopt;
}

SearchLoopResult run_search_loop(llm::ChatGateway& gateway, const MetaData& meta, SearchTool& tool,
                                 const llm::Embedder& embedder, const SearchLoopOptions& options) {
    if (options.max_iterations < 1) throw Error("max_iterations must be at least 1");
    SearchLoopResult result;
    std::vector<SourceDocument> kept;
    for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
        const auto query = next_query(gateway, meta, result.memory);
        if (!query) break;
        result.memory.add(*query);
        std::vector<Document> docs;
        ++result.tool_calls;
        try {
            docs = tool.fetch(*query);
        } catch (const Error& e) {
            result.warnings.push_back(tool.name() + " tool failed for query \"" + *query + "\": " + e.what());
            continue;
        }
        for (auto& doc : docs) {
            std::string body = doc.html ? deformat_html(doc.body) : text::trim(doc.body);
            if (body.empty() || !screen_document(body, doc.source, options.blocklist)) {
                ++result.documents_dropped;
                continue;
            }
            ++result.documents_kept;
            kept.push_back({doc.source, std::move(body)});
        }
    }
    result.chunks = build_rag_index(kept, options.chunk_chars, options.overlap_chars, embedder);
    return result;
}

}  // namespace matmcd::da
