#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace matmcd::cli {

/// Runs one command line. Artifacts go to files and `out`, diagnostics to
/// `err`. Returns 0 iff no error was reported.
///
///   matmcd [--config F] [--seed N] [--backend M] [--cassette F] [--out DIR] [--dot]
///          discover | refine | evaluate | rca  [command flags]
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "<dataset>.<engine>.<stage>.json" with unsafe characters replaced by '_'.
std::string artifact_name(const std::string& dataset, const std::string& engine, const std::string& stage,
                          const std::string& extension = "json");

}  // namespace matmcd::cli
