#include "matmcd/llm/gateway.hpp"

#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::llm {

ChatGateway::ChatGateway(std::shared_ptr<ChatBackend> backend, std::string model)
    : backend_(std::move(backend)), model_(std::move(model)) {
    if (!backend_) throw GatewayError("chat gateway needs a backend");
}

ChatResponse ChatGateway::chat(ChatRequest request) {
    if (request.user.empty()) throw GatewayError("chat request has an empty user message");
    if (request.model.empty()) request.model = model_;
    {
        std::lock_guard lock(mutex_);
        calls_.push_back({request.tag, request_key(request), request.temperature});
    }
    ChatResponse response = backend_->complete(request);
    if (text::trim(response.content).empty()) {
        throw GatewayError("empty completion for tag '" + request.tag + "'");
    }
    return response;
}

ChatResponse ChatGateway::retry_with_escalation(ChatRequest request, const ResponseValidator& validator,
                                                int max_attempts) {
    if (max_attempts < 1) throw Error("max_attempts must be at least 1");
    std::string last;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        if (attempt > 1) request.temperature = kRetryTemperature;
        ChatResponse response = chat(request);
        if (validator(response.content)) return response;
        last = std::move(response.content);
    }
    throw ParseError("no valid response for tag '" + request.tag + "' after " + std::to_string(max_attempts) +
                         " attempts",
                     last);
}

std::vector<CallRecord> ChatGateway::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

}  // namespace matmcd::llm
