#include "matmcd/llm/backends.hpp"

#include "matmcd/util/error.hpp"

namespace matmcd::llm {

void ScriptedBackend::push(const std::string& tag, std::string content) {
    std::lock_guard lock(mutex_);
    queues_[tag].push_back(std::move(content));
}

std::size_t ScriptedBackend::pending(const std::string& tag) const {
    std::lock_guard lock(mutex_);
    auto it = queues_.find(tag);
    return it == queues_.end() ? 0 : it->second.size();
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
    {
        std::lock_guard lock(mutex_);
        for (const std::string& tag : {request.tag, std::string()}) {
            auto it = queues_.find(tag);
            if (it != queues_.end() && !it->second.empty()) {
                ChatResponse r{std::move(it->second.front()), BackendKind::Scripted};
                it->second.pop_front();
                return r;
            }
        }
    }
    if (responder_) {
        if (auto content = responder_(request)) return {std::move(*content), BackendKind::Scripted};
    }
    throw GatewayError("scripted queue exhausted for tag '" + request.tag + "'");
}

ReplayBackend::ReplayBackend(std::shared_ptr<Cassette> cassette, bool strict, std::shared_ptr<ChatBackend> fallback)
    : cassette_(std::move(cassette)), strict_(strict), fallback_(std::move(fallback)) {
    if (!cassette_) throw GatewayError("replay backend needs a cassette");
}

ChatResponse ReplayBackend::complete(const ChatRequest& request) {
    const std::string key = request_key(request);
    if (auto content = cassette_->next(key)) return {std::move(*content), BackendKind::Replay};
    if (strict_ || !fallback_) {
        throw GatewayError("replay miss for request " + key + " (tag '" + request.tag + "')");
    }
    ChatResponse r = fallback_->complete(request);
    cassette_->append(request, r.content);
    return r;
}

RecordingBackend::RecordingBackend(std::shared_ptr<ChatBackend> inner, std::shared_ptr<Cassette> cassette)
    : inner_(std::move(inner)), cassette_(std::move(cassette)) {
    if (!inner_ || !cassette_) throw GatewayError("recording backend needs an inner backend and a cassette");
}

ChatResponse RecordingBackend::complete(const ChatRequest& request) {
    ChatResponse r = inner_->complete(request);
    cassette_->append(request, r.content);
    return r;
}

LiveBackend::LiveBackend(LiveBackendOptions options) : options_(std::move(options)), transport_(options_.transport) {}

nlohmann::json LiveBackend::request_body(const ChatRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    if (request.system) messages.push_back({{"role", "system"}, {"content", *request.system}});
    messages.push_back({{"role", "user"}, {"content", request.user}});
    return {{"model", request.model}, {"messages", std::move(messages)}, {"temperature", request.temperature}};
}

std::string LiveBackend::extract_content(const nlohmann::json& response) {
    try {
        const auto& msg = response.at("choices").at(0).at("message");
        if (!msg.contains("content") || msg.at("content").is_null()) return {};
        return msg.at("content").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
        throw GatewayError(std::string("unexpected chat-completion response shape: ") + ex.what());
    }
}

ChatResponse LiveBackend::complete(const ChatRequest& request) {
    Headers headers;
    const std::string key = env_or_empty(options_.api_key_env);
    if (!key.empty()) headers.emplace_back("Authorization", "Bearer " + key);
    const auto response = transport_.post_json(options_.base_url + "/chat/completions", request_body(request), headers);
    return {extract_content(response), BackendKind::Live};
}

}  // namespace matmcd::llm
