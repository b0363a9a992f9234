#pragma once

#include <cstdint>
#include <string>

namespace matmcd::pipeline {

enum class Engine { Pc, ExactSearch, DirectLingam };
enum class BackendMode { Live, Replay, Record, Scripted };
enum class ToolKind { None, Web, Log, Corpus };

/// "pc", "exact", "lingam" (plus a few aliases). Throws on anything else.
Engine parse_engine(const std::string& text);
BackendMode parse_backend(const std::string& text);
ToolKind parse_tool(const std::string& text);

/// Short identifier used in file names and reports ("pc", "exact", "lingam").
const char* to_string(Engine engine);
const char* to_string(BackendMode mode);
const char* to_string(ToolKind tool);
/// Algorithm name as written into the Knowledge LLM prompt.
const char* display_name(Engine engine);

struct PipelineConfig {
    Engine engine = Engine::Pc;
    double alpha = 0.05;
    std::size_t max_conditioning_size = 3;
    std::size_t max_parents = 2;
    /// infinity selects hard DirectLiNGAM constraints.
    double soft_weight = 1.0;
    double weight_threshold = 0.05;

    int k = 1;
    int max_iterations = 8;
    std::uint64_t seed = 0;

    BackendMode backend = BackendMode::Replay;
    std::string cassette;
    std::string model = "gpt-4o";
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key_env = "OPENAI_API_KEY";

    bool da_agent = true;
    ToolKind tool = ToolKind::None;
    std::string blocklist;
    std::string corpus_dir;
    std::string log_dir;
    std::string search_endpoint = "https://google.serper.dev/search";
    std::string search_key_env = "SERPER_API_KEY";
    std::size_t search_results = 5;
    std::size_t chunk_chars = 2000;
    std::size_t overlap_chars = 200;
    std::size_t per_section_k = 3;
    std::size_t log_cap = 10;
    std::size_t embedding_dimension = 1024;
    /// "hashing" (local, deterministic) or "remote" (embeddings endpoint at base_url).
    std::string embedder = "hashing";
    std::string embedding_model = "text-embedding-ada-002";

    /// Throws Error naming the first invalid field. Backend and tool settings
    /// are only checked when `agents` is set.
    void validate(bool agents = true) const;
};

}  // namespace matmcd::pipeline
