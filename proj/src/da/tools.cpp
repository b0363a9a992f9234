#include "matmcd/da/tools.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "matmcd/da/html.hpp"
#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::da {

SerperWebTool::SerperWebTool(SerperOptions options)
    : options_(std::move(options)), transport_(options_.transport) {}

std::vector<WebResult> SerperWebTool::parse_response(const nlohmann::json& response, std::size_t limit) {
    std::vector<WebResult> results;
    if (!response.is_object() || !response.contains("organic") || !response["organic"].is_array()) return results;
    for (const auto& item : response["organic"]) {
        if (results.size() >= limit) break;
        if (!item.is_object()) continue;
        WebResult r;
        r.title = item.value("title", "");
        r.url = item.value("link", "");
        r.snippet = item.value("snippet", "");
        if (r.url.empty() && r.snippet.empty()) continue;
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<Document> SerperWebTool::to_documents(const std::vector<WebResult>& results) {
    std::vector<Document> docs;
    for (const auto& r : results) {
        if (r.page_html) {
            docs.push_back({r.url, *r.page_html, true});
        } else {
            std::string body = r.title;
            if (!r.snippet.empty()) body += body.empty() ? r.snippet : ". " + r.snippet;
            docs.push_back({r.url, decode_entities(body), false});
        }
    }
    return docs;
}

std::vector<Document> SerperWebTool::fetch(const std::string& query) {
    const std::string key = llm::env_or_empty(options_.api_key_env);
    if (key.empty()) throw GatewayError("web search key variable " + options_.api_key_env + " is not set");
    const nlohmann::json body = {{"q", query}, {"num", options_.results}};
    auto results = parse_response(
        transport_.post_json(options_.endpoint, body, {{"X-API-KEY", key}}), options_.results);
    if (options_.fetch_pages) {
        for (auto& r : results) {
            try {
                r.page_html = transport_.get_text(r.url);
            } catch (const GatewayError&) {
                // keep the snippet when the page itself is unreachable
            }
        }
    }
    return to_documents(results);
}

LocalCorpusTool::LocalCorpusTool(const std::filesystem::path& dir, std::size_t results) : results_(results) {
    if (!std::filesystem::is_directory(dir)) throw Error("corpus is not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        Entry e;
        e.name = path.filename().string();
        e.body = buf.str();
        const auto ext = text::to_lower(path.extension().string());
        e.html = ext == ".html" || ext == ".htm";
        const auto words = text::tokenize_words(e.html ? deformat_html(e.body) : e.body);
        e.words = {words.begin(), words.end()};
        entries_.push_back(std::move(e));
    }
}

std::vector<Document> LocalCorpusTool::fetch(const std::string& query) {
    const auto qwords = text::tokenize_words(query);
    const std::set<std::string> terms(qwords.begin(), qwords.end());
    std::vector<std::pair<std::size_t, std::size_t>> scored;  // (overlap, entry)
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        std::size_t overlap = 0;
        for (const auto& t : terms) overlap += entries_[i].words.count(t);
        if (overlap > 0) scored.emplace_back(overlap, i);
    }
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Document> docs;
    for (std::size_t r = 0; r < scored.size() && r < results_; ++r) {
        const auto& e = entries_[scored[r].second];
        docs.push_back({"corpus:" + e.name, e.body, e.html});
    }
    return docs;
}

LogTool::LogTool(LogStore store, llm::ChatGateway& gateway, MetaData meta, std::size_t cap, std::uint64_t seed)
    : store_(std::move(store)), gateway_(gateway), meta_(std::move(meta)), cap_(cap), seed_(seed) {}

std::vector<Document> LogTool::fetch(const std::string& query) {
    std::vector<Document> docs;
    for (const auto& name : meta_.names) {
        if (served_.count(name) || text::find_ci(query, name) == std::string::npos) continue;
        auto it = store_.find(name);
        if (it == store_.end() || it->second.empty()) continue;
        served_.insert(name);
        docs.push_back({"log:" + name, summarize_log_entity(gateway_, meta_.title, it->second, meta_.names, cap_, seed_),
                        false});
    }
    return docs;
}

}  // namespace matmcd::da
