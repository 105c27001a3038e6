#pragma once

// Subcommand drivers shared by the CLI and the tests. Each takes a parsed
// JSON config and returns the report plus the process exit code.

#include <string>

#include "glvsos/config.hpp"
#include "glvsos/report.hpp"

namespace glvsos {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNegative = 3;
inline constexpr int kExitNumerical = 4;

struct CommandOptions {
  /// Directory for CSV/JSON artifacts; empty writes nothing.
  std::string out_dir;
  /// "json" or "csv" for the stdout rendering.
  std::string format = "json";
  bool strict = false;
};

struct CommandResult {
  Json report;
  /// What the CLI prints on stdout.
  std::string text;
  int exit_code = kExitOk;
};

CommandResult check_sos(const Json& config, const CommandOptions& options);
CommandResult check_sizos(const Json& config, const CommandOptions& options);
CommandResult synthesize(const Json& config, const CommandOptions& options);
CommandResult simulate(const Json& config, const CommandOptions& options);
/// kind is "bounds" or "coeffs".
CommandResult sweep(const std::string& kind, const Json& config,
                    const CommandOptions& options);

/// Embedded configuration of case study "1a", "1b", "2" or "3".
Json case_study_config(const std::string& id);
/// Runs the check and the vertex simulations of a case study. Keys in
/// `overrides` replace the embedded ones.
CommandResult case_study(const std::string& id, const Json& overrides,
                         const CommandOptions& options);

/// Maps a library exception to a CLI exit code.
int exit_code_for(const std::exception& e);

}  // namespace glvsos
