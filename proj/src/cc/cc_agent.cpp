#include "matmcd/cc/cc_agent.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>

#include "matmcd/prompt/template.hpp"
#include "matmcd/prompt/templates.hpp"
#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::cc {

namespace {

struct Marker {
    char kind;  // 'G' or 'P'
    int number;
    std::size_t begin;  // first character of the marker
    std::size_t body;   // first character after the colon
};

std::vector<Marker> find_markers(std::string_view s) {
    std::vector<Marker> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c != 'G' && c != 'P') continue;
        if (i > 0 && !(std::isspace(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '*')) continue;
        std::size_t j = i + 1;
        int number = 0;
        std::size_t digits = 0;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])) && digits < 4) {
            number = number * 10 + (s[j] - '0');
            ++j;
            ++digits;
        }
        if (digits == 0) continue;
        while (j < s.size() && s[j] == '*') ++j;
        if (j >= s.size() || s[j] != ':') continue;
        out.push_back({c, number, i, j + 1});
    }
    return out;
}

// Position of the last whole-word, case-insensitive occurrence of `word`.
std::optional<std::size_t> last_word(std::string_view s, std::string_view word) {
    std::optional<std::size_t> found;
    for (std::size_t pos = text::find_ci(s, word); pos != std::string::npos; pos = text::find_ci(s, word, pos + 1)) {
        const bool left = pos == 0 || !std::isalnum(static_cast<unsigned char>(s[pos - 1]));
        const std::size_t end = pos + word.size();
        const bool right = end >= s.size() || !std::isalnum(static_cast<unsigned char>(s[end]));
        if (left && right) found = pos;
    }
    return found;
}

Conclusion read_conclusion(std::string_view block) {
    const auto yes = last_word(block, "<yes>");
    const auto no = last_word(block, "<no>");
    if (yes || no) {
        if (yes && no) return *yes > *no ? Conclusion::Yes : Conclusion::No;
        return yes ? Conclusion::Yes : Conclusion::No;
    }
    const auto bare_yes = last_word(block, "yes");
    const auto bare_no = last_word(block, "no");
    if (bare_yes && bare_no) return *bare_yes > *bare_no ? Conclusion::Yes : Conclusion::No;
    if (bare_yes) return Conclusion::Yes;
    if (bare_no) return Conclusion::No;
    return Conclusion::Unknown;
}

std::optional<double> read_probability(std::string_view block) {
    for (std::size_t i = 0; i < block.size(); ++i) {
        const bool starts = std::isdigit(static_cast<unsigned char>(block[i])) ||
                            (block[i] == '.' && i + 1 < block.size() &&
                             std::isdigit(static_cast<unsigned char>(block[i + 1])));
        if (!starts) continue;
        const std::string tail(block.substr(i));
        char* end = nullptr;
        double v = std::strtod(tail.c_str(), &end);
        if (end == tail.c_str() || !std::isfinite(v)) return std::nullopt;
        std::size_t after = static_cast<std::size_t>(end - tail.c_str());
        while (after < tail.size() && tail[after] == ' ') ++after;
        if (after < tail.size() && tail[after] == '%') v /= 100.0;
        if (i > 0 && block[i - 1] == '-') v = 0.0;
        return std::clamp(v, 0.0, 1.0);
    }
    return std::nullopt;
}

}  // namespace

const char* to_string(Conclusion c) {
    switch (c) {
        case Conclusion::Yes:
            return "yes";
        case Conclusion::No:
            return "no";
        case Conclusion::Unknown:
            return "unknown";
    }
    return "unknown";
}

std::string render_pair_prompt(const CausalGraph& g0, const MetaData& meta, std::pair<NodeId, NodeId> pair,
                               const da::ContextBundle& context, const std::string& algo_name,
                               std::vector<std::string>* warnings) {
    const auto [i, j] = pair;
    if (i == j) throw Error("pair prompt needs two distinct variables");
    if (i >= meta.names.size() || j >= meta.names.size()) throw Error("pair index outside the variable list");
    const std::string& ni = meta.names[i];
    const std::string& nj = meta.names[j];
    auto info = [&](const std::string& name) {
        if (!context.variable_summaries.count(name) && warnings) {
            warnings->push_back("no summary for variable " + name + "; using the placeholder");
        }
        return name + ": " + context.summary_of(name);
    };
    return prompt::render(prompt::kKnowledgeTemplate,
                          {{"dataset_name", meta.title},
                           {"dataset_information",
                            context.dataset_summary.empty() ? std::string(da::kNoInformation)
                                                            : context.dataset_summary},
                           {"node_names", text::join(meta.names, ", ")},
                           {"algorithm_name", algo_name},
                           {"adjacency_list", to_adjacency_list_text(g0, meta)},
                           {"node_i", ni},
                           {"node_j", nj},
                           {"a_or_no", g0.has_edge(i, j) ? "a" : "no"},
                           {"info_i", info(ni)},
                           {"info_j", info(nj)}});
}

std::string explain_pair(llm::ChatGateway& gateway, const std::string& prompt) {
    llm::ChatRequest request;
    request.user = prompt;
    request.tag = "knowledge";
    return gateway.chat(std::move(request)).content;
}

std::string render_constraint_prompt(const MetaData& meta, std::pair<NodeId, NodeId> pair,
                                     const std::string& explanation, int k) {
    return prompt::render(prompt::kConstraintTemplate, {{"k", std::to_string(k)},
                                                        {"dataset_name", meta.title},
                                                        {"node_i", meta.names.at(pair.first)},
                                                        {"node_j", meta.names.at(pair.second)},
                                                        {"explanation", text::trim(explanation)}});
}

GuessSet parse_topk_guesses(std::string_view content, int k) {
    if (k < 1) throw Error("K must be at least 1");
    const auto markers = find_markers(content);
    std::map<int, std::string_view> g_blocks, p_blocks;
    for (std::size_t m = 0; m < markers.size(); ++m) {
        const auto& mk = markers[m];
        if (mk.number < 1 || mk.number > k) continue;
        const std::size_t end = m + 1 < markers.size() ? markers[m + 1].begin : content.size();
        auto& target = mk.kind == 'G' ? g_blocks : p_blocks;
        target.try_emplace(mk.number, content.substr(mk.body, end - mk.body));
    }
    GuessSet set;
    for (const auto& [number, g] : g_blocks) {
        auto p = p_blocks.find(number);
        if (p == p_blocks.end()) continue;
        const Conclusion c = read_conclusion(g);
        const auto prob = read_probability(p->second);
        if (c == Conclusion::Unknown || !prob) continue;
        set.guesses.push_back({text::trim(g), c, *prob});
    }
    if (set.guesses.empty()) throw ParseError("no well-formed G/P guess in reply", std::string(content));
    return set;
}

std::size_t most_confident(const GuessSet& set) {
    if (set.guesses.empty()) throw Error("empty guess set");
    std::size_t best = 0;
    for (std::size_t g = 1; g < set.guesses.size(); ++g) {
        if (set.guesses[g].confidence > set.guesses[best].confidence) best = g;
    }
    return best;
}

PairDecision decide_pair(llm::ChatGateway& gateway, const MetaData& meta, const std::string& explanation,
                         std::pair<NodeId, NodeId> pair, int k) {
    PairDecision d;
    d.from = pair.first;
    d.to = pair.second;
    d.explanation = explanation;
    llm::ChatRequest request;
    request.user = render_constraint_prompt(meta, pair, explanation, k);
    request.tag = "constraint";
    const auto valid = [k](const std::string& content) {
        try {
            parse_topk_guesses(content, k);
            return true;
        } catch (const ParseError&) {
            return false;
        }
    };
    try {
        const auto set = parse_topk_guesses(gateway.retry_with_escalation(std::move(request), valid).content, k);
        const auto& best = set.guesses[most_confident(set)];
        d.conclusion = best.conclusion;
        d.confidence = best.confidence;
    } catch (const ParseError&) {
        d.conclusion = Conclusion::Unknown;
        d.confidence = 0.0;
    }
    return d;
}

ConstraintMatrix assemble_constraint_matrix(const std::vector<PairDecision>& decisions, std::size_t n) {
    ConstraintMatrix c(n);
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const auto& d : decisions) {
        if (d.from == d.to) throw Error("decision on a self pair");
        if (d.from >= n || d.to >= n) throw Error("decision index outside the matrix");
        if (!seen.emplace(d.from, d.to).second) {
            throw Error("duplicate decision for pair (" + std::to_string(d.from) + ", " + std::to_string(d.to) + ")");
        }
        if (d.conclusion == Conclusion::Yes) c.require(d.from, d.to, d.confidence);
        else if (d.conclusion == Conclusion::No) c.forbid(d.from, d.to, d.confidence);
    }
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = i + 1; j < n; ++j) {
            if (!c.is_required(i, j) || !c.is_required(j, i)) continue;
            if (c.confidence(j, i) > c.confidence(i, j)) c.clear(i, j);
            else c.clear(j, i);
        }
    }
    return c;
}

std::vector<PairDecision> run_cc_agent(llm::ChatGateway& gateway, const CausalGraph& g0, const MetaData& meta,
                                       const da::ContextBundle& context, const std::string& algo_name, int k,
                                       std::vector<std::string>* warnings) {
    std::vector<PairDecision> decisions;
    const std::size_t n = meta.names.size();
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j = 0; j < n; ++j) {
            if (i == j) continue;
            const std::string explanation =
                explain_pair(gateway, render_pair_prompt(g0, meta, {i, j}, context, algo_name, warnings));
            decisions.push_back(decide_pair(gateway, meta, explanation, {i, j}, k));
        }
    }
    return decisions;
}

}  // namespace matmcd::cc
