#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "commands.hpp"
#include "commscape/error.hpp"
#include "commscape/parallel.hpp"
#include "json_config.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

int fail(const char* kind, const std::exception& e, int code) {
  std::cerr << "commscape: " << kind << ": " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace commscape;

  CLI::App app{"Walk-based community detection, evaluation and customer-quality scoring", "commscape"};
  app.option_defaults()->always_capture_default();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<cli::JsonConfig>());
  app.set_config("--config", "", "JSON file of option values; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  cli::GlobalOptions global;
  app.add_option("--threads", global.threads, "Worker threads; 0 uses every core")
      ->envname("COMMSCAPE_THREADS")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-q,--quiet", global.quiet, "Suppress progress lines on stderr");

  auto handlers = cli::add_commands(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  cli::set_quiet(global.quiet);
  parallel::set_thread_count(global.threads);

  try {
    for (auto& [cmd, run] : handlers) {
      if (cmd->parsed()) return run();
    }
    std::cerr << app.help();
    return kExitUsage;
  } catch (const cli::UsageError& e) {
    return fail("usage error", e, kExitUsage);
  } catch (const ArgumentError& e) {
    return fail("usage error", e, kExitUsage);
  } catch (const ParseError& e) {
    return fail("data error", e, kExitData);
  } catch (const std::exception& e) {
    return fail("error", e, kExitData);
  }
}
