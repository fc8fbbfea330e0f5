#pragma once

// Shared plumbing for the cod command-line tool.

#include "cod/expr.hpp"
#include "cod/grid.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace cod::cli {

enum ExitCode : int { ok = 0, solver_error = 1, divergence = 2, bad_arguments = 3 };

/// Invalid user input detected before or during setup; maps to exit code 3.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads `key=value` lines (`#` starts a comment) and returns them as `--key=value` tokens.
std::vector<std::string> config_tokens(const std::filesystem::path& file);

/// Moves `--config FILE` / `--config=FILE` out of the subcommand arguments and splices the
/// file's settings in right after the subcommand name, so explicit flags override them.
std::vector<std::string> expand_config(std::vector<std::string> args);

/// Output directory, created on demand.
std::filesystem::path prepare_output_dir(const std::string& dir);

void write_text(const std::filesystem::path& file, const std::string& text);

/// Samples an expression of one variable on a grid.
GridFunction sample_expression(const Grid& grid, const std::string& source, const std::string& variable);

GridFunction load_csv(const std::string& path);

/// Shorthand for a `%.17g` number.
inline std::string num(double v) { return format_double(v); }

} // namespace cod::cli
