#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "matmcd/llm/backends.hpp"
#include "matmcd/llm/chat.hpp"

namespace matmcd::llm {

struct CallRecord {
    std::string tag;
    std::string key;
    double temperature = 0.0;
};

using ResponseValidator = std::function<bool(const std::string&)>;

inline constexpr int kDefaultMaxAttempts = 3;

/// Entry point for every model call. Shareable across threads.
class ChatGateway {
public:
    ChatGateway(std::shared_ptr<ChatBackend> backend, std::string model);

    /// One round-trip. Throws GatewayError on an empty completion.
    ChatResponse chat(ChatRequest request);

    /// First attempt at the request's temperature (0.5 by default), later
    /// attempts at 0.7, until `validator` accepts. Throws ParseError carrying
    /// the last raw content when every attempt fails validation.
    ChatResponse retry_with_escalation(ChatRequest request, const ResponseValidator& validator,
                                       int max_attempts = kDefaultMaxAttempts);

    std::vector<CallRecord> calls() const;
    const std::string& model() const noexcept { return model_; }

private:
    std::shared_ptr<ChatBackend> backend_;
    std::string model_;
    mutable std::mutex mutex_;
    std::vector<CallRecord> calls_;
};

}  // namespace matmcd::llm
