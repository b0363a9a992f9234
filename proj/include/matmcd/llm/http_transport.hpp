#pragma once

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace matmcd::llm {

using Headers = std::vector<std::pair<std::string, std::string>>;

struct HttpTransportOptions {
    /// Total attempts for transport failures, 429 and 5xx responses.
    int attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::chrono::seconds timeout{120};
};

/// The only code in the library that talks to the network.
class HttpTransport {
public:
    explicit HttpTransport(HttpTransportOptions options = {});

    nlohmann::json post_json(const std::string& url, const nlohmann::json& body, const Headers& headers) const;
    std::string get_text(const std::string& url, const Headers& headers = {}) const;

private:
    HttpTransportOptions options_;
};

/// Value of an environment variable, or empty when unset.
std::string env_or_empty(const std::string& name);

}  // namespace matmcd::llm
