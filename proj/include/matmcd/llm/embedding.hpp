#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "matmcd/llm/http_transport.hpp"

namespace matmcd::llm {

/// Maps text to a fixed-length vector. Retrieval normalizes the output.
using Embedder = std::function<std::vector<double>(std::string_view)>;

struct RemoteEmbedderOptions {
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "text-embedding-ada-002";
    std::string api_key_env = "OPENAI_API_KEY";
    HttpTransportOptions transport;
};

/// Embeddings endpoint client ({"model", "input"} -> data[0].embedding).
Embedder make_remote_embedder(RemoteEmbedderOptions options);

}  // namespace matmcd::llm
