#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace commscape::cli {

/// Bad flag combination or value found after parsing; exits with status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  int threads = 0;
  bool quiet = false;
};

/// Line-oriented diagnostics on standard error.
void log_line(const std::string& message);
void set_quiet(bool quiet);

/// Adds every subcommand to `app`. The returned handlers are keyed by the
/// subcommand they belong to; main runs the one that was selected.
std::vector<std::pair<CLI::App*, std::function<int()>>> add_commands(CLI::App& app);

}  // namespace commscape::cli
