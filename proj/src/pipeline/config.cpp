#include "matmcd/pipeline/config.hpp"

#include <cmath>

#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::pipeline {

Engine parse_engine(const std::string& text) {
    const std::string t = text::to_lower(text::trim(text));
    if (t == "pc") return Engine::Pc;
    if (t == "exact" || t == "es" || t == "exact_search" || t == "exact-search") return Engine::ExactSearch;
    if (t == "lingam" || t == "directlingam" || t == "direct_lingam" || t == "direct-lingam") {
        return Engine::DirectLingam;
    }
    throw Error("unknown engine '" + text + "' (expected pc, exact or lingam)");
}

BackendMode parse_backend(const std::string& text) {
    const std::string t = text::to_lower(text::trim(text));
    if (t == "live") return BackendMode::Live;
    if (t == "replay") return BackendMode::Replay;
    if (t == "record") return BackendMode::Record;
    if (t == "scripted") return BackendMode::Scripted;
    throw Error("unknown backend '" + text + "' (expected live, replay, record or scripted)");
}

ToolKind parse_tool(const std::string& text) {
    const std::string t = text::to_lower(text::trim(text));
    if (t == "none" || t.empty()) return ToolKind::None;
    if (t == "web") return ToolKind::Web;
    if (t == "log") return ToolKind::Log;
    if (t == "corpus") return ToolKind::Corpus;
    throw Error("unknown tool '" + text + "' (expected web, log, corpus or none)");
}

const char* to_string(Engine engine) {
    switch (engine) {
        case Engine::Pc:
            return "pc";
        case Engine::ExactSearch:
            return "exact";
        case Engine::DirectLingam:
            return "lingam";
    }
    return "?";
}

const char* to_string(BackendMode mode) {
    switch (mode) {
        case BackendMode::Live:
            return "live";
        case BackendMode::Replay:
            return "replay";
        case BackendMode::Record:
            return "record";
        case BackendMode::Scripted:
            return "scripted";
    }
    return "?";
}

const char* to_string(ToolKind tool) {
    switch (tool) {
        case ToolKind::None:
            return "none";
        case ToolKind::Web:
            return "web";
        case ToolKind::Log:
            return "log";
        case ToolKind::Corpus:
            return "corpus";
    }
    return "?";
}

const char* display_name(Engine engine) {
    switch (engine) {
        case Engine::Pc:
            return "PC";
        case Engine::ExactSearch:
            return "Exact Search";
        case Engine::DirectLingam:
            return "DirectLiNGAM";
    }
    return "?";
}

void PipelineConfig::validate(bool agents) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
    if (std::isnan(soft_weight) || soft_weight < 0.0) throw Error("soft_weight must be non-negative");
    if (weight_threshold < 0.0) throw Error("weight_threshold must be non-negative");
    if (k < 1) throw Error("K must be at least 1");
    if (max_iterations < 1) throw Error("max_iterations must be at least 1");
    if (chunk_chars == 0 || overlap_chars >= chunk_chars) throw Error("chunk_chars must exceed overlap_chars");
    if (per_section_k == 0) throw Error("per_section_k must be at least 1");
    if (log_cap == 0) throw Error("log_cap must be at least 1");
    if (embedding_dimension == 0) throw Error("embedding_dimension must be positive");
    if (embedder != "hashing" && embedder != "remote") throw Error("embedder must be hashing or remote");
    if (!agents) return;
    if ((backend == BackendMode::Replay || backend == BackendMode::Record) && cassette.empty()) {
        throw Error(std::string(to_string(backend)) + " backend needs a cassette path");
    }
    if (tool == ToolKind::Corpus && corpus_dir.empty()) throw Error("corpus tool needs corpus_dir");
    if (tool == ToolKind::Log && log_dir.empty()) throw Error("log tool needs log_dir");
}

}  // namespace matmcd::pipeline
