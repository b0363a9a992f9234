#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "matmcd/llm/chat.hpp"

namespace matmcd::llm {

struct CassetteEntry {
    std::string key;
    nlohmann::json request;
    std::string content;
};

/// Recorded request -> response store, persisted as a JSON array of
/// {key, request, content}. A key may appear several times; replay hands the
/// recordings out in order and repeats the last one once they run out.
class Cassette {
public:
    Cassette() = default;
    /// Loads `path` if it exists; appends are written back to it.
    explicit Cassette(std::filesystem::path path);

    std::optional<std::string> next(const std::string& key);
    void append(const ChatRequest& request, const std::string& content);

    std::vector<CassetteEntry> entries() const;
    std::size_t size() const;
    void save() const;

    static std::vector<CassetteEntry> parse(const nlohmann::json& doc);
    static nlohmann::json serialize(const std::vector<CassetteEntry>& entries);

private:
    void save_locked() const;

    mutable std::mutex mutex_;
    std::filesystem::path path_;
    std::vector<CassetteEntry> entries_;
    std::map<std::string, std::vector<std::size_t>> by_key_;
    std::map<std::string, std::size_t> cursor_;
};

}  // namespace matmcd::llm
