#include "matmcd/da/logs.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>

#include "matmcd/prompt/template.hpp"
#include "matmcd/prompt/templates.hpp"
#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::da {

LogStore load_log_store(const std::filesystem::path& dir, const std::vector<std::string>& names) {
    if (!std::filesystem::is_directory(dir)) throw DataError("log store is not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".log") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    LogStore store;
    for (const auto& path : files) {
        const std::string entity = path.stem().string();
        if (std::find(names.begin(), names.end(), entity) == names.end()) {
            throw DataError("log file " + path.filename().string() + " names no dataset variable");
        }
        std::ifstream in(path);
        if (!in) throw DataError("cannot read " + path.string());
        auto& records = store[entity];
        std::map<std::string, std::size_t> slot;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (text::trim(line).empty()) continue;
            const auto t1 = line.find('\t');
            const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
            if (t2 == std::string::npos) {
                throw DataError(path.filename().string() + ":" + std::to_string(line_no) +
                                ": expected <timestamp>\\t<template-id>\\t<raw line>");
            }
            const std::string tmpl = line.substr(t1 + 1, t2 - t1 - 1);
            auto [it, inserted] = slot.try_emplace(tmpl, records.size());
            if (inserted) records.push_back({entity, tmpl, {}});
            records[it->second].occurrences.push_back({line.substr(0, t1), line.substr(t2 + 1)});
        }
    }
    return store;
}

std::string strip_template_markers(std::string_view tmpl) {
    std::string out(tmpl);
    for (std::size_t pos; (pos = out.find("<*>")) != std::string::npos;) out.replace(pos, 3, " ");
    return text::collapse_whitespace(out);
}

std::vector<LogOccurrence> sample_occurrences(const LogRecord& record, std::size_t cap, std::uint64_t seed,
                                              std::uint64_t stream) {
    if (cap == 0) throw Error("log event cap must be at least 1");
    if (record.occurrences.size() <= cap) return record.occurrences;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<LogOccurrence> out;
    out.reserve(cap);
    std::sample(record.occurrences.begin(), record.occurrences.end(), std::back_inserter(out), cap, rng);
    return out;
}

std::vector<std::string> render_log_events(const std::vector<LogRecord>& records, std::size_t cap,
                                           std::uint64_t seed) {
    std::vector<std::string> lines;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const std::string tmpl = strip_template_markers(records[r].template_text);
        for (const auto& occ : sample_occurrences(records[r], cap, seed, r)) {
            lines.push_back(occ.timestamp + " | " + tmpl + " | " + text::trim(occ.raw));
        }
    }
    return lines;
}

std::string render_log_prompt(const std::string& dataset_title, const std::vector<LogRecord>& records,
                              const std::vector<std::string>& siblings, std::size_t cap, std::uint64_t seed) {
    if (records.empty()) throw Error("log summary needs at least one record");
    const std::string& entity = records.front().entity;
    for (const auto& r : records) {
        if (r.entity != entity) throw Error("log records of several entities passed to one summary");
    }
    const auto events = render_log_events(records, cap, seed);
    return prompt::render(prompt::kSummaryLogTemplate,
                          {{"dataset_name", dataset_title},
                           {"node_names", text::join(siblings, ", ")},
                           {"node_name", entity},
                           {"log_format", std::string(kLogFormat)},
                           {"log_events", events.empty() ? "No events." : text::join(events, "\n")}});
}

std::string summarize_log_entity(llm::ChatGateway& gateway, const std::string& dataset_title,
                                 const std::vector<LogRecord>& records, const std::vector<std::string>& siblings,
                                 std::size_t cap, std::uint64_t seed) {
    llm::ChatRequest request;
    request.user = render_log_prompt(dataset_title, records, siblings, cap, seed);
    request.tag = "log_summary";
    auto valid = [](const std::string& content) { return text::find_ci(content, "role of the entity") != std::string::npos; };
    return text::trim(gateway.retry_with_escalation(std::move(request), valid).content);
}

std::string summarize_log_entity(llm::ChatGateway& gateway, const std::string& dataset_title,
                                 const LogRecord& record, const std::vector<std::string>& siblings, std::size_t cap,
                                 std::uint64_t seed) {
    return summarize_log_entity(gateway, dataset_title, std::vector<LogRecord>{record}, siblings, cap, seed);
}

}  // namespace matmcd::da
