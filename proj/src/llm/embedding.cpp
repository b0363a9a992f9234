#include "matmcd/llm/embedding.hpp"

#include <memory>

#include "matmcd/util/error.hpp"

namespace matmcd::llm {

Embedder make_remote_embedder(RemoteEmbedderOptions options) {
    auto transport = std::make_shared<HttpTransport>(options.transport);
    return [options = std::move(options), transport](std::string_view input) {
        Headers headers;
        const std::string key = env_or_empty(options.api_key_env);
        if (!key.empty()) headers.emplace_back("Authorization", "Bearer " + key);
        const nlohmann::json body = {{"model", options.model}, {"input", std::string(input)}};
        const auto response = transport->post_json(options.base_url + "/embeddings", body, headers);
        try {
            return response.at("data").at(0).at("embedding").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& ex) {
            throw GatewayError(std::string("unexpected embeddings response shape: ") + ex.what());
        }
    };
}

}  // namespace matmcd::llm
