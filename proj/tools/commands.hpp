#pragma once

#include <CLI11.hpp>

#include <functional>
#include <string>

namespace cod::cli {

/// Registers every subcommand on `app`. `run` receives the selected command's action.
void register_commands(CLI::App& app, std::function<int()>& action);

} // namespace cod::cli
