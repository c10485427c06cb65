#include <iostream>

#include <CLI11.hpp>

#include "softmin/app/catalog.hpp"
#include "softmin/app/config.hpp"
#include "softmin/app/runner.hpp"
#include "softmin/app/validate.hpp"

int main(int argc, char** argv) {
  using namespace softmin::app;

  CLI::App app{"Soft-min Energy particle optimizer experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment described by a YAML config");
  run_cmd->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the master seed");
  auto* threads_opt = run_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));

  auto* validate_cmd = app.add_subcommand("validate", "Run the invariant suite");
  auto* catalog_cmd = app.add_subcommand("catalog", "List the benchmark objectives");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_config_error;
  }

  if (*run_cmd) {
    RunConfig config;
    try {
      config = load_config(config_path);
    } catch (const ConfigError& e) {
      std::cerr << e.what() << '\n';
      return exit_config_error;
    }
    RunOptions options;
    if (*seed_opt) options.seed = seed;
    if (*threads_opt) options.threads = threads;
    options.log = &std::cout;
    return run(std::move(config), out_dir, options);
  }
  if (*validate_cmd) return validate(std::cout);
  if (*catalog_cmd) {
    print_catalog(std::cout, softmin::LandscapeCatalog{});
    return 0;
  }
  return 0;
}
