#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vicert.h"

#ifndef VICERT_GOLDEN_DIR
#define VICERT_GOLDEN_DIR "fixtures/golden"
#endif

namespace {

std::string default_golden_dir() {
  if (const char* env = std::getenv("VICERT_GOLDEN_DIR")) return env;
  return VICERT_GOLDEN_DIR;
}

int run(const std::string& scenario, const std::string& out_dir,
        const std::optional<std::uint64_t>& seed, const std::optional<std::int64_t>& max_iters) {
  vicert_run_options opts{};
  if (seed) {
    opts.has_seed = 1;
    opts.seed = *seed;
  }
  if (max_iters) {
    opts.has_max_iters = 1;
    opts.max_iters = *max_iters;
  }
  int exit_status = 1;
  char* message = nullptr;
  if (vicert_run_scenario(scenario.c_str(), out_dir.c_str(), &opts, &exit_status, &message) !=
      VICERT_OK) {
    std::cerr << "vicert: " << vicert_last_error() << "\n";
    return 1;
  }
  if (message != nullptr && message[0] != '\0') std::cerr << "vicert: " << message << "\n";
  vicert_string_free(message);
  return exit_status;
}

int list_golden(const std::string& dir) {
  char* listing = nullptr;
  if (vicert_list_golden(dir.c_str(), &listing) != VICERT_OK) {
    std::cerr << "vicert: " << vicert_last_error() << "\n";
    return 1;
  }
  std::cout << listing;
  vicert_string_free(listing);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vicert: variational-inequality solvers with expansiveness certificates"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> max_iters;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file and write traces and reports");
  run_cmd->add_option("scenario", scenario, "Scenario JSON file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--seed", seed, "Override config.seed");
  run_cmd->add_option("--max-iters", max_iters, "Override config.max_iters")
      ->check(CLI::PositiveNumber);

  std::string golden_dir = default_golden_dir();
  auto* list_cmd = app.add_subcommand("list-golden", "List bundled golden scenarios");
  list_cmd->add_option("--dir", golden_dir, "Fixture directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share the malformed-input status.
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run_cmd) return run(scenario, out_dir, seed, max_iters);
  return list_golden(golden_dir);
}
