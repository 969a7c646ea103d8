#pragma once

#include <memory>
#include <vector>

#include "cli_support.hpp"

namespace panelcast::cli {

/// Adds every subcommand to `root`.
std::vector<std::unique_ptr<Command>> register_commands(CLI::App& root);

}  // namespace panelcast::cli
