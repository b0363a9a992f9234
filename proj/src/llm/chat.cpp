#include "matmcd/llm/chat.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <memory>

#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::llm {

const char* to_string(BackendKind kind) {
    switch (kind) {
        case BackendKind::Replay: return "replay";
        case BackendKind::Scripted: return "scripted";
        case BackendKind::Live: break;
    }
    return "live";
}

nlohmann::json canonical_request(const ChatRequest& request) {
    nlohmann::json doc;
    doc["system"] = request.system ? nlohmann::json(text::collapse_whitespace(*request.system)) : nlohmann::json();
    doc["user"] = text::collapse_whitespace(request.user);
    doc["temperature"] = request.temperature;
    doc["model"] = request.model;
    return doc;
}

std::string sha256_hex(const std::string& data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw GatewayError("SHA-256 digest failed");
    }
    std::string hex;
    hex.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        char buf[3];
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

std::string request_key(const ChatRequest& request) { return sha256_hex(canonical_request(request).dump()); }

}  // namespace matmcd::llm
