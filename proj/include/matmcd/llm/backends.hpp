#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "matmcd/llm/cassette.hpp"
#include "matmcd/llm/chat.hpp"
#include "matmcd/llm/http_transport.hpp"

namespace matmcd::llm {

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// Canned responses, consumed FIFO per request tag. Requests whose tag has no
/// queue (or an empty one) fall back to the untagged queue, then to the
/// optional responder function.
class ScriptedBackend : public ChatBackend {
public:
    using Responder = std::function<std::optional<std::string>(const ChatRequest&)>;

    ScriptedBackend() = default;
    explicit ScriptedBackend(Responder responder) : responder_(std::move(responder)) {}

    void push(const std::string& tag, std::string content);
    void push(std::string content) { push("", std::move(content)); }
    std::size_t pending(const std::string& tag) const;

    ChatResponse complete(const ChatRequest& request) override;

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::deque<std::string>> queues_;
    Responder responder_;
};

/// Serves recorded responses keyed by request hash. A miss is an error in
/// strict mode; otherwise the request goes to `fallback` and is recorded.
class ReplayBackend : public ChatBackend {
public:
    ReplayBackend(std::shared_ptr<Cassette> cassette, bool strict = true,
                  std::shared_ptr<ChatBackend> fallback = nullptr);

    ChatResponse complete(const ChatRequest& request) override;

private:
    std::shared_ptr<Cassette> cassette_;
    bool strict_;
    std::shared_ptr<ChatBackend> fallback_;
};

/// Forwards to `inner` and appends every exchange to the cassette.
class RecordingBackend : public ChatBackend {
public:
    RecordingBackend(std::shared_ptr<ChatBackend> inner, std::shared_ptr<Cassette> cassette);

    ChatResponse complete(const ChatRequest& request) override;

private:
    std::shared_ptr<ChatBackend> inner_;
    std::shared_ptr<Cassette> cassette_;
};

struct LiveBackendOptions {
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key_env = "OPENAI_API_KEY";
    HttpTransportOptions transport;
};

/// Chat-completions JSON over HTTP: {"model", "messages", "temperature"}.
class LiveBackend : public ChatBackend {
public:
    explicit LiveBackend(LiveBackendOptions options = {});

    ChatResponse complete(const ChatRequest& request) override;

    static nlohmann::json request_body(const ChatRequest& request);
    static std::string extract_content(const nlohmann::json& response);

private:
    LiveBackendOptions options_;
    HttpTransport transport_;
};

}  // namespace matmcd::llm
