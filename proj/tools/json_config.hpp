#pragma once

#include <istream>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace commscape::cli {

/// CLI11 config reader for JSON files. Top-level keys set global options;
/// an object keyed by a subcommand name sets that subcommand's options.
/// Arrays become repeated values.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                        std::string prefix) const override;
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace commscape::cli
