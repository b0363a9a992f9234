#include "matmcd/da/screening.hpp"

#include <fstream>
#include <sstream>

#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::da {

namespace {

bool glob_match(std::string_view pattern, std::string_view s) {
    std::size_t p = 0, i = 0, star = std::string_view::npos, mark = 0;
    while (i < s.size()) {
        if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = i;
        } else if (p < pattern.size() && pattern[p] == s[i]) {
            ++p;
            ++i;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            i = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::string host_of(const std::string& source) {
    std::size_t start = source.find("://");
    start = start == std::string::npos ? 0 : start + 3;
    std::size_t end = source.find_first_of("/?#", start);
    std::string host = source.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (const auto at = host.rfind('@'); at != std::string::npos) host.erase(0, at + 1);
    if (const auto colon = host.find(':'); colon != std::string::npos) host.erase(colon);
    return host;
}

bool source_matches(const std::string& pattern, const std::string& source) {
    if (pattern.find('*') != std::string::npos) return glob_match(pattern, source);
    if (pattern.find('/') != std::string::npos) return source.find(pattern) != std::string::npos;
    const std::string host = host_of(source);
    if (host == pattern) return true;
    return host.size() > pattern.size() && host.compare(host.size() - pattern.size(), pattern.size(), pattern) == 0 &&
           host[host.size() - pattern.size() - 1] == '.';
}

}  // namespace

Blocklist Blocklist::parse(std::string_view text) {
    Blocklist list;
    std::size_t line_no = 0;
    for (const auto& raw : text::split_lines(text)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = text::trim(line);
        if (line.empty()) continue;
        if (text::starts_with_ci(line, "leak:")) {
            std::vector<std::string> phrases;
            std::string rest = line.substr(5);
            std::size_t pos = 0;
            while (true) {
                const std::size_t amp = rest.find("&&", pos);
                std::string phrase = text::collapse_whitespace(
                    text::to_lower(rest.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos)));
                if (!phrase.empty()) phrases.push_back(std::move(phrase));
                if (amp == std::string::npos) break;
                pos = amp + 2;
            }
            if (phrases.empty()) throw Error("blocklist line " + std::to_string(line_no) + ": leak rule without phrases");
            list.leak_rules.push_back(std::move(phrases));
        } else {
            list.source_patterns.push_back(text::to_lower(line));
        }
    }
    return list;
}

Blocklist Blocklist::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read blocklist " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void Blocklist::add_default_leak_rules(const std::string& dataset_title) {
    leak_rules.push_back({"ground truth causal graph"});
    const std::string title = text::collapse_whitespace(text::to_lower(dataset_title));
    if (!title.empty()) leak_rules.push_back({"ground truth", "causal", title});
}

bool screen_document(std::string_view doc, std::string_view source, const Blocklist& blocklist) {
    const std::string src = text::to_lower(text::trim(source));
    for (const auto& pattern : blocklist.source_patterns) {
        if (source_matches(pattern, src)) return false;
    }
    if (blocklist.leak_rules.empty()) return true;
    const std::string body = text::collapse_whitespace(text::to_lower(doc));
    for (const auto& rule : blocklist.leak_rules) {
        bool all = true;
        for (const auto& phrase : rule) {
            if (body.find(phrase) == std::string::npos) {
                all = false;
                break;
            }
        }
        if (all) return false;
    }
    return true;
}

}  // namespace matmcd::da
