#include "matmcd/da/summary.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "matmcd/prompt/template.hpp"
#include "matmcd/prompt/templates.hpp"
#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::da {

namespace {

enum class Section { None, Dataset, Variable, Relationships };

struct Header {
    Section section;
    std::string name;  // variable name for Section::Variable
    std::string rest;  // text after the colon on the same line
};

// Drops bullets, markdown emphasis and heading marks from the start of a line.
std::string strip_markup(std::string_view line) {
    std::string s = text::trim(line);
    while (!s.empty() && (s.front() == '-' || s.front() == '*' || s.front() == '#' || s.front() == '>')) {
        s.erase(0, 1);
        s = text::trim(s);
    }
    return s;
}

std::string unbold(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), '*'), s.end());
    return text::trim(s);
}

std::optional<Header> match_header(std::string_view raw, const MetaData& meta) {
    const std::string line = strip_markup(raw);
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
        // Bare "Relationships" style heading.
        const std::string label = text::to_lower(unbold(line));
        if (text::starts_with_ci(label, "relationship") && label.size() < 60) {
            return Header{Section::Relationships, {}, {}};
        }
        return std::nullopt;
    }
    const std::string label = unbold(line.substr(0, colon));
    std::string rest = unbold(line.substr(colon + 1));
    if (text::to_lower(label) == "dataset summary") return Header{Section::Dataset, {}, rest};
    if (text::starts_with_ci(label, "summary of ")) {
        std::string name = text::trim(label.substr(11));
        if (name.size() >= 2 && (name.front() == '"' || name.front() == '\'' || name.front() == '<')) {
            name = text::trim(name.substr(1, name.size() - 2));
        }
        for (const auto& n : meta.names) {
            if (text::to_lower(n) == text::to_lower(name)) return Header{Section::Variable, n, rest};
        }
        return Header{Section::Relationships, {}, name + ": " + rest};
    }
    if (text::starts_with_ci(label, "relationship") && label.size() < 60) {
        return Header{Section::Relationships, {}, rest};
    }
    return std::nullopt;
}

void append_text(std::string& target, const std::string& piece) {
    if (piece.empty()) return;
    if (!target.empty()) target += ' ';
    target += piece;
}

}  // namespace

ContextBundle ContextBundle::empty(const MetaData& meta) {
    ContextBundle b;
    b.dataset_summary = std::string(kNoInformation);
    b.relationship_notes = std::string(kNoInformation);
    for (const auto& n : meta.names) b.variable_summaries[n] = std::string(kNoInformation);
    return b;
}

const std::string& ContextBundle::summary_of(const std::string& name) const {
    static const std::string placeholder(kNoInformation);
    auto it = variable_summaries.find(name);
    return it == variable_summaries.end() ? placeholder : it->second;
}

ContextBundle parse_summary_reply(std::string_view content, const MetaData& meta) {
    ContextBundle b;
    Section current = Section::None;
    std::string current_name;
    bool any = false;
    for (const auto& raw : text::split_lines(content)) {
        if (text::trim(raw).empty()) continue;
        if (auto h = match_header(raw, meta)) {
            current = h->section;
            current_name = h->name;
            if (current == Section::Dataset || current == Section::Variable) any = true;
            std::string& target = current == Section::Dataset    ? b.dataset_summary
                                  : current == Section::Variable ? b.variable_summaries[current_name]
                                                                 : b.relationship_notes;
            append_text(target, text::trim(h->rest));
            continue;
        }
        const std::string body = text::trim(raw);
        switch (current) {
            case Section::None:
                break;
            case Section::Dataset:
                append_text(b.dataset_summary, body);
                break;
            case Section::Variable:
                append_text(b.variable_summaries[current_name], body);
                break;
            case Section::Relationships:
                append_text(b.relationship_notes, body);
                break;
        }
    }
    if (!any) throw ParseError("summary reply has no dataset or variable section", std::string(content));
    if (b.dataset_summary.empty()) b.dataset_summary = std::string(kNoInformation);
    if (b.relationship_notes.empty()) b.relationship_notes = std::string(kNoInformation);
    for (const auto& n : meta.names) {
        auto& s = b.variable_summaries[n];
        if (s.empty()) s = std::string(kNoInformation);
    }
    return b;
}

std::vector<std::string> section_queries(const MetaData& meta) {
    std::vector<std::string> q;
    q.push_back(meta.title + " dataset overview");
    for (const auto& n : meta.names) q.push_back(meta.title + " " + n);
    q.push_back(meta.title + " relationships between " + text::join(meta.names, ", "));
    return q;
}

std::vector<RetrievedChunk> select_excerpts(const MetaData& meta, const std::vector<RetrievedChunk>& index,
                                            std::size_t per_section_k, const llm::Embedder& embedder) {
    std::set<std::size_t> ids;
    std::vector<RetrievedChunk> out;
    for (const auto& q : section_queries(meta)) {
        for (auto& hit : mips_retrieve(index, q, per_section_k, embedder)) {
            if (ids.insert(hit.chunk.id).second) out.push_back(std::move(hit.chunk));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::string render_summary_prompt(const MetaData& meta, const std::vector<RetrievedChunk>& excerpts) {
    std::vector<std::string> blocks;
    for (const auto& c : excerpts) {
        blocks.push_back("[Chunk " + std::to_string(c.id) + "] (source: " + c.source + ")\n" + text::trim(c.body));
    }
    return prompt::render(prompt::kSummaryRagTemplate, {{"dataset_name", meta.title},
                                                        {"node_names", text::join(meta.names, ", ")},
                                                        {"rag_excerpts", text::join(blocks, "\n\n")}});
}

ContextBundle summarize_context(llm::ChatGateway& gateway, const MetaData& meta,
                                const std::vector<RetrievedChunk>& index, std::size_t per_section_k,
                                const llm::Embedder& embedder) {
    if (index.empty()) return ContextBundle::empty(meta);
    llm::ChatRequest request;
    request.user = render_summary_prompt(meta, select_excerpts(meta, index, per_section_k, embedder));
    request.tag = "summary";
    const auto valid = [&](const std::string& content) {
        try {
            parse_summary_reply(content, meta);
            return true;
        } catch (const ParseError&) {
            return false;
        }
    };
    return parse_summary_reply(gateway.retry_with_escalation(std::move(request), valid).content, meta);
}

}  // namespace matmcd::da
