#include "matmcd/io/config_file.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>

#include "matmcd/io/dataset_io.hpp"
#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::io {

namespace {

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v, std::size_t line_no) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        std::string out;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            if (v[i] == '\\' && i + 2 < v.size()) {
                const char n = v[++i];
                out.push_back(n == 'n' ? '\n' : n == 't' ? '\t' : n);
            } else {
                out.push_back(v[i]);
            }
        }
        return out;
    }
    if (!v.empty() && v.front() == '"') throw Error("config line " + std::to_string(line_no) + ": unterminated string");
    return v;
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) throw Error("config key " + key + ": '" + v + "' is not a number");
    return d;
}

long long to_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) throw Error("config key " + key + ": '" + v + "' is not an integer");
    return i;
}

std::size_t to_size(const std::string& key, const std::string& v) {
    const long long i = to_int(key, v);
    if (i < 0) throw Error("config key " + key + " must be non-negative");
    return static_cast<std::size_t>(i);
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string t = text::to_lower(v);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw Error("config key " + key + ": '" + v + "' is not a boolean");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view content) {
    std::map<std::string, std::string> out;
    std::string section;
    const auto lines = text::split_lines(content);
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const std::string line = text::trim(strip_comment(lines[l]));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw Error("config line " + std::to_string(l + 1) + ": malformed section header");
            section = text::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("config line " + std::to_string(l + 1) + ": expected key = value");
        const std::string key = text::trim(line.substr(0, eq));
        if (key.empty()) throw Error("config line " + std::to_string(l + 1) + ": empty key");
        const std::string full = section.empty() ? key : section + "." + key;
        if (out.count(full)) throw Error("config key " + full + " is set twice");
        out[full] = unquote(text::trim(line.substr(eq + 1)), l + 1);
    }
    return out;
}

ConfigFile parse_config(std::string_view content, const std::filesystem::path& base_dir) {
    ConfigFile cf;
    auto& p = cf.pipeline;
    auto path = [&](const std::string& v) {
        if (v.empty()) return v;
        const std::filesystem::path fp(v);
        return (fp.is_absolute() || base_dir.empty() ? fp : base_dir / fp).lexically_normal().string();
    };
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"data.csv", [&](auto&, auto& v) { cf.data_csv = path(v); }},
        {"data.truth", [&](auto&, auto& v) { cf.truth = path(v); }},
        {"data.rca_cases", [&](auto&, auto& v) { cf.rca_cases = path(v); }},
        {"engine.name", [&](auto&, auto& v) { p.engine = pipeline::parse_engine(v); }},
        {"engine.alpha", [&](auto& k, auto& v) { p.alpha = to_double(k, v); }},
        {"engine.max_conditioning_size", [&](auto& k, auto& v) { p.max_conditioning_size = to_size(k, v); }},
        {"engine.max_parents", [&](auto& k, auto& v) { p.max_parents = to_size(k, v); }},
        {"engine.soft_weight",
         [&](auto& k, auto& v) {
             p.soft_weight = text::to_lower(v) == "hard" ? std::numeric_limits<double>::infinity() : to_double(k, v);
         }},
        {"engine.weight_threshold", [&](auto& k, auto& v) { p.weight_threshold = to_double(k, v); }},
        {"agents.k", [&](auto& k, auto& v) { p.k = static_cast<int>(to_int(k, v)); }},
        {"agents.max_iterations", [&](auto& k, auto& v) { p.max_iterations = static_cast<int>(to_int(k, v)); }},
        {"agents.seed", [&](auto& k, auto& v) { p.seed = to_size(k, v); }},
        {"seed", [&](auto& k, auto& v) { p.seed = to_size(k, v); }},
        {"agents.da_agent", [&](auto& k, auto& v) { p.da_agent = to_bool(k, v); }},
        {"agents.tool", [&](auto&, auto& v) { p.tool = pipeline::parse_tool(v); }},
        {"agents.blocklist", [&](auto&, auto& v) { p.blocklist = path(v); }},
        {"agents.corpus_dir", [&](auto&, auto& v) { p.corpus_dir = path(v); }},
        {"agents.log_dir", [&](auto&, auto& v) { p.log_dir = path(v); }},
        {"agents.search_endpoint", [&](auto&, auto& v) { p.search_endpoint = v; }},
        {"agents.search_key_env", [&](auto&, auto& v) { p.search_key_env = v; }},
        {"agents.search_results", [&](auto& k, auto& v) { p.search_results = to_size(k, v); }},
        {"agents.chunk_chars", [&](auto& k, auto& v) { p.chunk_chars = to_size(k, v); }},
        {"agents.overlap_chars", [&](auto& k, auto& v) { p.overlap_chars = to_size(k, v); }},
        {"agents.per_section_k", [&](auto& k, auto& v) { p.per_section_k = to_size(k, v); }},
        {"agents.log_cap", [&](auto& k, auto& v) { p.log_cap = to_size(k, v); }},
        {"agents.embedder", [&](auto&, auto& v) { p.embedder = v; }},
        {"agents.embedding_model", [&](auto&, auto& v) { p.embedding_model = v; }},
        {"agents.embedding_dimension", [&](auto& k, auto& v) { p.embedding_dimension = to_size(k, v); }},
        {"llm.backend", [&](auto&, auto& v) { p.backend = pipeline::parse_backend(v); }},
        {"llm.cassette", [&](auto&, auto& v) { p.cassette = path(v); }},
        {"llm.model", [&](auto&, auto& v) { p.model = v; }},
        {"llm.base_url", [&](auto&, auto& v) { p.base_url = v; }},
        {"llm.api_key_env", [&](auto&, auto& v) { p.api_key_env = v; }},
    };
    for (const auto& [key, value] : parse_key_values(content)) {
        auto it = setters.find(key);
        if (it == setters.end()) throw Error("unknown config key '" + key + "'");
        it->second(key, value);
    }
    return cf;
}

ConfigFile load_config(const std::filesystem::path& path) {
    try {
        return parse_config(read_file(path), path.parent_path());
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

}  // namespace matmcd::io
