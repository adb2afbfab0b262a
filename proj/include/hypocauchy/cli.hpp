#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hypocauchy::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNotConverged = 3;

struct RunOptions {
  std::string subcommand;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

const std::vector<std::string>& subcommands();

/// Validates the config, runs one experiment and writes its CSV tables plus manifest.json
/// into out_dir. Returns the process exit code; diagnostics go to standard error.
int run(const RunOptions& opts);

}  // namespace hypocauchy::cli
