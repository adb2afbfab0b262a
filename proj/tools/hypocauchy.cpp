#include <CLI11.hpp>

#include <iostream>

#include "hypocauchy/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = hypocauchy::cli;
  CLI::App app{"Experiments with generalized Cauchy operators of planar hypocomplex vector fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HYPOCAUCHY_VERSION);
  cli::RunOptions opts;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  for (const auto& name : cli::subcommands()) {
    auto* sub = app.add_subcommand(name, "run a '" + name + "' experiment");
    sub->add_option("--config", opts.config_path, "experiment file (INI)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "override the config seed");
    sub->callback([&opts, name] { opts.subcommand = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitValidation;
  }
  opts.threads = threads;
  opts.seed = seed;
  return cli::run(opts);
}
