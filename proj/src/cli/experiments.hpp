#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace hypocauchy::cli {

using Schema = std::map<std::string, std::set<std::string>>;
using Computation = std::function<void(RunResult&)>;

struct Experiment {
  std::string name;
  Schema schema;
  /// Parses and validates every parameter; the returned computation does the work.
  std::function<Computation(const Config&, std::uint64_t seed)> prepare;
};

const std::vector<Experiment>& experiments();

/// Constant reproducing L(c T 1) = 1 in the elliptic model on the unit disc.
Complex calibrated_normalization();

}  // namespace hypocauchy::cli
