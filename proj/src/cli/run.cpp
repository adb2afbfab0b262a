#include <fmt/format.h>
#include <omp.h>

#include <chrono>
#include <filesystem>
#include <iostream>

#include "experiments.hpp"
#include "hypocauchy/cli.hpp"
#include "hypocauchy/error.hpp"

namespace hypocauchy::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::FitFailed:
    case ErrorCode::CalibrationFailed:
    case ErrorCode::Singular:
      return kExitNotConverged;
    default:
      return kExitValidation;
  }
}

const char* status_for(int code) {
  switch (code) {
    case kExitOk:
      return "ok";
    case kExitValidation:
      return "validation_error";
    case kExitNotConverged:
      return "not_converged";
    default:
      return "error";
  }
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& e : experiments()) n.push_back(e.name);
    return n;
  }();
  return names;
}

int run(const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  nlohmann::ordered_json manifest;
  manifest["tool"] = "hypocauchy";
  manifest["version"] = HYPOCAUCHY_VERSION;
  manifest["subcommand"] = opts.subcommand;
  manifest["config_path"] = opts.config_path;
  manifest["config"] = nullptr;

  RunResult result;
  int code = kExitOk;
  std::string error;
  std::uint64_t seed = 0;
  const fs::path out(opts.out_dir);
  try {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw Error(ErrorCode::Config, "cannot create output directory '" + opts.out_dir + "'");
  } catch (const Error& e) {
    std::cerr << "hypocauchy: " << e.what() << "\n";
    return kExitValidation;
  }

  if (opts.threads) {
    if (*opts.threads < 1) {
      error = "--threads must be positive";
      code = kExitValidation;
    } else {
      omp_set_num_threads(*opts.threads);
    }
  }
  manifest["threads"] = omp_get_max_threads();

  Computation compute;
  if (code == kExitOk) {
    try {
      const auto it = std::find_if(experiments().begin(), experiments().end(),
                                   [&](const Experiment& e) { return e.name == opts.subcommand; });
      if (it == experiments().end()) throw Error(ErrorCode::Config, "unknown subcommand '" + opts.subcommand + "'");
      const Config cfg = Config::load(opts.config_path);
      manifest["config"] = cfg.echo();
      if (cfg.has("experiment", "kind") && cfg.text("experiment", "kind") != it->name)
        config_error("[experiment] kind", "config is for '" + cfg.text("experiment", "kind") + "', not '" + it->name + "'");
      cfg.check_schema(it->schema);
      const long s = cfg.integer("experiment", "seed", 0);
      if (s < 0) config_error("[experiment] seed", "must be non-negative");
      seed = opts.seed.value_or(static_cast<std::uint64_t>(s));
      compute = it->prepare(cfg, seed);
    } catch (const Error& e) {
      error = e.what();
      code = kExitValidation;
    }
  }
  manifest["seed"] = seed;

  if (code == kExitOk) {
    try {
      compute(result);
      if (!result.converged) code = kExitNotConverged;
    } catch (const Error& e) {
      error = e.what();
      code = exit_code_for(e.code());
      result.tables.clear();
      result.texts.clear();
    }
  }

  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  try {
    for (const auto& [name, table] : result.tables) {
      write_file(out / name, table.render());
      outputs.push_back(name);
    }
    for (const auto& [name, text] : result.texts) {
      write_file(out / name, text);
      outputs.push_back(name);
    }
  } catch (const std::exception& e) {
    error = e.what();
    code = kExitValidation;
  }

  manifest["status"] = status_for(code);
  manifest["exit_code"] = code;
  manifest["error"] = error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(error);
  manifest["convergence"] = result.convergence;
  manifest["summary"] = result.summary;
  manifest["outputs"] = outputs;
  manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_file(out / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    std::cerr << "hypocauchy: " << e.what() << "\n";
  }

  if (!error.empty()) std::cerr << "hypocauchy: " << error << "\n";
  for (const auto& [name, ok] : result.convergence.items())
    if (!ok.get<bool>()) std::cerr << "hypocauchy: not converged: " << name << "\n";
  return code;
}

}  // namespace hypocauchy::cli
