#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "matmcd/da/logs.hpp"
#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/llm/gateway.hpp"
#include "matmcd/llm/http_transport.hpp"

namespace matmcd::da {

/// A fetched page or note. `html` bodies are de-formatted before indexing.
struct Document {
    std::string source;
    std::string body;
    bool html = false;
};

/// The toolkit handle the search loop calls once per query.
class SearchTool {
public:
    virtual ~SearchTool() = default;
    virtual std::vector<Document> fetch(const std::string& query) = 0;
    virtual std::string name() const = 0;
};

struct WebResult {
    std::string title;
    std::string url;
    std::string snippet;
    std::optional<std::string> page_html;
};

struct SerperOptions {
    std::string endpoint = "https://google.serper.dev/search";
    std::string api_key_env = "SERPER_API_KEY";
    std::size_t results = 5;
    bool fetch_pages = true;
    llm::HttpTransportOptions transport;
};

/// Serper-style web search: POST {"q", "num"}, read "organic" results.
class SerperWebTool : public SearchTool {
public:
    explicit SerperWebTool(SerperOptions options = {});

    std::vector<Document> fetch(const std::string& query) override;
    std::string name() const override { return "web"; }

    static std::vector<WebResult> parse_response(const nlohmann::json& response, std::size_t limit);
    /// Page HTML when fetched, otherwise "title. snippet" as plain text.
    static std::vector<Document> to_documents(const std::vector<WebResult>& results);

private:
    SerperOptions options_;
    llm::HttpTransport transport_;
};

/// Offline stand-in for web search: files in a directory ranked by how many
/// distinct query words they contain (ties by file name).
class LocalCorpusTool : public SearchTool {
public:
    explicit LocalCorpusTool(const std::filesystem::path& dir, std::size_t results = 5);

    std::vector<Document> fetch(const std::string& query) override;
    std::string name() const override { return "corpus"; }

private:
    struct Entry {
        std::string name;
        std::string body;
        bool html;
        std::set<std::string> words;
    };
    std::vector<Entry> entries_;
    std::size_t results_;
};

/// Log lookup: a query naming an entity yields the log summary of that
/// entity, produced once per run.
class LogTool : public SearchTool {
public:
    LogTool(LogStore store, llm::ChatGateway& gateway, MetaData meta, std::size_t cap = kDefaultLogCap,
            std::uint64_t seed = 0);

    std::vector<Document> fetch(const std::string& query) override;
    std::string name() const override { return "log"; }

private:
    LogStore store_;
    llm::ChatGateway& gateway_;
    MetaData meta_;
    std::size_t cap_;
    std::uint64_t seed_;
    std::set<std::string> served_;
};

}  // namespace matmcd::da
