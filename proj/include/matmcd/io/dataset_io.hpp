#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matmcd/graph/causal_graph.hpp"
#include "matmcd/rca/rca.hpp"
#include "matmcd/scd/dataset.hpp"

namespace matmcd::io {

/// CSV with a header row of variable names and numeric rows below. Errors
/// name the 1-based file row and column of the offending cell.
Dataset parse_dataset_csv(std::string_view content, const std::string& title);

/// Reads `path`; the title comes from `<stem>.meta.json` ({"title": ...})
/// next to it, or from the file name stem.
Dataset load_dataset_csv(const std::filesystem::path& path);

/// Header plus rows, every value printed with 17 significant digits so a
/// reload gives back the same doubles.
std::string serialize_dataset_csv(const Dataset& data);
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);

/// {"edges": [["A", "B"], ...]} with names resolved against `names`.
/// Throws on an unknown name (listing the known ones) or a cycle (printed).
CausalGraph parse_truth_graph(std::string_view content, const std::vector<std::string>& names);
CausalGraph load_truth_graph(const std::filesystem::path& path, const std::vector<std::string>& names);

/// One RCA fault as read from disk. `series`, when present, feeds the
/// anomaly pre-filter instead of explicit scores.
struct RcaCaseFile {
    rca::RcaCase rca_case;
    std::optional<std::vector<std::vector<double>>> series;
};

/// A case object or an array of them:
/// {"fault_id", "group"?, "anomaly_scores": {name: score} | "series": {name: [..]},
///  "truth_root_causes": [names]}. Nodes missing from anomaly_scores score 0.
std::vector<RcaCaseFile> parse_rca_cases(std::string_view content, const std::vector<std::string>& names);
std::vector<RcaCaseFile> load_rca_cases(const std::filesystem::path& path, const std::vector<std::string>& names);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary file and a rename.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace matmcd::io
