#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "matmcd/llm/gateway.hpp"

namespace matmcd::da {

struct LogOccurrence {
    std::string timestamp;
    std::string raw;
};

/// All occurrences of one event template for one entity.
struct LogRecord {
    std::string entity;
    std::string template_text;
    std::vector<LogOccurrence> occurrences;
};

/// entity -> records, in order of each template's first appearance.
using LogStore = std::map<std::string, std::vector<LogRecord>>;

inline constexpr std::size_t kDefaultLogCap = 10;
inline constexpr std::string_view kLogFormat = "<timestamp> | <event template> | <raw log line>";

/// Reads `<entity>.log` files, lines "<timestamp>\t<template-id>\t<raw line>".
/// Files whose stem is not one of `names` are rejected.
LogStore load_log_store(const std::filesystem::path& dir, const std::vector<std::string>& names);

/// Removes "<*>" parameter markers and collapses the leftover whitespace.
std::string strip_template_markers(std::string_view tmpl);

/// At most `cap` occurrences, drawn uniformly without replacement from a
/// generator seeded by (seed, stream). Original order is kept.
std::vector<LogOccurrence> sample_occurrences(const LogRecord& record, std::size_t cap, std::uint64_t seed,
                                              std::uint64_t stream = 0);

/// Event lines for the log-summary prompt, one per sampled occurrence.
std::vector<std::string> render_log_events(const std::vector<LogRecord>& records, std::size_t cap,
                                           std::uint64_t seed);

/// Log-summary prompt for one entity.
std::string render_log_prompt(const std::string& dataset_title, const std::vector<LogRecord>& records,
                              const std::vector<std::string>& siblings, std::size_t cap, std::uint64_t seed);

/// Summary LLM over the capped log events of one entity. Throws ParseError
/// when no attempt follows the requested layout.
std::string summarize_log_entity(llm::ChatGateway& gateway, const std::string& dataset_title,
                                 const std::vector<LogRecord>& records, const std::vector<std::string>& siblings,
                                 std::size_t cap, std::uint64_t seed);

std::string summarize_log_entity(llm::ChatGateway& gateway, const std::string& dataset_title,
                                 const LogRecord& record, const std::vector<std::string>& siblings, std::size_t cap,
                                 std::uint64_t seed);

}  // namespace matmcd::da
