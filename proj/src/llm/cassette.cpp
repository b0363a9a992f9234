#include "matmcd/llm/cassette.hpp"

#include <fstream>

#include "matmcd/util/error.hpp"

namespace matmcd::llm {

Cassette::Cassette(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.empty() || !std::filesystem::exists(path_)) return;
    std::ifstream in(path_);
    if (!in) throw GatewayError("cannot read cassette " + path_.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw GatewayError("malformed cassette " + path_.string() + ": " + ex.what());
    }
    entries_ = parse(doc);
    for (std::size_t i = 0; i < entries_.size(); ++i) by_key_[entries_[i].key].push_back(i);
}

std::vector<CassetteEntry> Cassette::parse(const nlohmann::json& doc) {
    if (!doc.is_array()) throw GatewayError("cassette must be a JSON array");
    std::vector<CassetteEntry> out;
    for (const auto& e : doc) {
        try {
            out.push_back({e.at("key").get<std::string>(), e.value("request", nlohmann::json::object()),
                           e.at("content").get<std::string>()});
        } catch (const nlohmann::json::exception& ex) {
            throw GatewayError(std::string("malformed cassette entry: ") + ex.what());
        }
    }
    return out;
}

nlohmann::json Cassette::serialize(const std::vector<CassetteEntry>& entries) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& e : entries) doc.push_back({{"key", e.key}, {"request", e.request}, {"content", e.content}});
    return doc;
}

std::optional<std::string> Cassette::next(const std::string& key) {
    std::lock_guard lock(mutex_);
    auto it = by_key_.find(key);
    if (it == by_key_.end()) return std::nullopt;
    std::size_t& cur = cursor_[key];
    const std::size_t idx = it->second[std::min(cur, it->second.size() - 1)];
    ++cur;
    return entries_[idx].content;
}

void Cassette::append(const ChatRequest& request, const std::string& content) {
    std::lock_guard lock(mutex_);
    nlohmann::json req = canonical_request(request);
    req["tag"] = request.tag;
    entries_.push_back({request_key(request), std::move(req), content});
    by_key_[entries_.back().key].push_back(entries_.size() - 1);
    if (!path_.empty()) save_locked();
}

std::vector<CassetteEntry> Cassette::entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

std::size_t Cassette::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void Cassette::save() const {
    std::lock_guard lock(mutex_);
    save_locked();
}

void Cassette::save_locked() const {
    if (path_.empty()) return;
    const auto tmp = std::filesystem::path(path_.string() + ".tmp");
    {
        std::ofstream out(tmp);
        if (!out) throw GatewayError("cannot write cassette " + tmp.string());
        out << serialize(entries_).dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path_);
}

}  // namespace matmcd::llm
