#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace matmcd::da {

/// Leak screening rules.
///
/// File format, one rule per line, "#" starts a comment:
///   example.com              drop pages hosted on example.com or a subdomain
///   https://site.org/path*   glob (with '*') matched against the whole source
///   leak: phrase && phrase   drop bodies containing every phrase (case-insensitive)
struct Blocklist {
    std::vector<std::string> source_patterns;
    std::vector<std::vector<std::string>> leak_rules;

    static Blocklist parse(std::string_view text);
    static Blocklist load(const std::filesystem::path& path);

    /// Adds rules catching pages that publish the reference graph of `dataset_title`.
    void add_default_leak_rules(const std::string& dataset_title);
};

/// False when the document must be dropped.
bool screen_document(std::string_view doc, std::string_view source, const Blocklist& blocklist);

}  // namespace matmcd::da
