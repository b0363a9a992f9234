#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace matmcd::llm {

inline constexpr double kDefaultTemperature = 0.5;
inline constexpr double kRetryTemperature = 0.7;

struct ChatRequest {
    std::optional<std::string> system;
    std::string user;
    double temperature = kDefaultTemperature;
    std::string model;
    /// Pipeline stage label ("search", "summary", "knowledge", ...). Not part of the cassette key.
    std::string tag;
};

enum class BackendKind { Live, Replay, Scripted };

const char* to_string(BackendKind kind);

struct ChatResponse {
    std::string content;
    BackendKind backend = BackendKind::Live;
};

/// Whitespace-normalized request fields, the input of the cassette key.
nlohmann::json canonical_request(const ChatRequest& request);

/// Hex SHA-256 of the compact canonical request JSON.
std::string request_key(const ChatRequest& request);

/// Hex SHA-256 of arbitrary text.
std::string sha256_hex(const std::string& data);

}  // namespace matmcd::llm
