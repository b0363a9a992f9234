#include <httplib.h>

#include "matmcd/llm/http_transport.hpp"

#include <cstdlib>
#include <thread>

#include "matmcd/util/error.hpp"

namespace matmcd::llm {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw GatewayError("URL without scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

httplib::Headers to_httplib(const Headers& headers) {
    httplib::Headers out;
    for (const auto& [k, v] : headers) out.emplace(k, v);
    return out;
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

template <typename Call>
std::string with_retries(const HttpTransportOptions& options, const std::string& url, Call&& call) {
    auto backoff = options.initial_backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= std::max(1, options.attempts); ++attempt) {
        httplib::Result res = call();
        if (res && res->status >= 200 && res->status < 300) return res->body;
        if (res && !retryable_status(res->status)) {
            throw GatewayError("HTTP " + std::to_string(res->status) + " from " + url + ": " + res->body.substr(0, 500));
        }
        last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
        if (attempt < options.attempts) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }
    throw GatewayError("transport failure for " + url + " after " + std::to_string(options.attempts) +
                       " attempts: " + last_error);
}

}  // namespace

HttpTransport::HttpTransport(HttpTransportOptions options) : options_(options) {}

nlohmann::json HttpTransport::post_json(const std::string& url, const nlohmann::json& body, const Headers& headers) const {
    const SplitUrl parts = split_url(url);
    const std::string payload = body.dump();
    const std::string response = with_retries(options_, url, [&] {
        httplib::Client client(parts.origin);
        client.set_read_timeout(options_.timeout);
        client.set_connection_timeout(std::chrono::seconds(15));
        return client.Post(parts.path, to_httplib(headers), payload, "application/json");
    });
    try {
        return nlohmann::json::parse(response);
    } catch (const nlohmann::json::exception& ex) {
        throw GatewayError("non-JSON response from " + url + ": " + ex.what());
    }
}

std::string HttpTransport::get_text(const std::string& url, const Headers& headers) const {
    const SplitUrl parts = split_url(url);
    return with_retries(options_, url, [&] {
        httplib::Client client(parts.origin);
        client.set_read_timeout(options_.timeout);
        client.set_connection_timeout(std::chrono::seconds(15));
        client.set_follow_location(true);
        return client.Get(parts.path, to_httplib(headers));
    });
}

std::string env_or_empty(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    return v ? std::string(v) : std::string();
}

}  // namespace matmcd::llm
