#pragma once

// Command dispatch for the CLI. Reports are deterministic JSON on `out`;
// diagnostics go to `err`. Exit codes: 0 success, 2 mathematical negative,
// 1 error.

#include <string>
#include <vector>

namespace germ {

struct CommandResult {
  std::string out;
  std::string err;
  int exit_code = 0;
};

/// `args` excludes the program name.
CommandResult run_command(const std::vector<std::string>& args);

}  // namespace germ
