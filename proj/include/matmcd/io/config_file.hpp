#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "matmcd/pipeline/config.hpp"

namespace matmcd::io {

/// Flat view of a TOML-style file: "[section]" headers and `key = value`
/// lines become "section.key" entries. Values may be quoted strings, numbers,
/// booleans or bare words; "#" starts a comment outside quotes.
std::map<std::string, std::string> parse_key_values(std::string_view content);

/// Config file plus the data paths it names.
struct ConfigFile {
    pipeline::PipelineConfig pipeline;
    std::string data_csv;
    std::string truth;
    std::string rca_cases;
};

/// Unknown keys are errors. Relative paths are resolved against `base_dir`.
ConfigFile parse_config(std::string_view content, const std::filesystem::path& base_dir = {});
ConfigFile load_config(const std::filesystem::path& path);

}  // namespace matmcd::io
