#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mep::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

struct Options {
  std::filesystem::path config;
  std::filesystem::path out = "out";
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::size_t workers = 1;
};

int cmd_train(const Options& opts, std::size_t count);
int cmd_connect(const Options& opts, const std::filesystem::path& min_a, const std::filesystem::path& min_b);
int cmd_explore(const Options& opts, const std::filesystem::path& minima_dir);
int cmd_eval_path(const Options& opts, const std::filesystem::path& chain_file, std::size_t m);

/// Parses argv and dispatches to a subcommand; returns the exit code.
int run(int argc, char** argv);

}  // namespace mep::cli
