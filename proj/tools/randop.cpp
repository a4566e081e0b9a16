#include <iostream>

#include <CLI11.hpp>

#include "randop/cli/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"randop: finite-volume random Schroedinger operator experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment and write result records");
  std::string config;
  randop::cli::Overrides ov;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  int workers = 0;
  std::string out, format, experiment;
  run->add_option("--config", config, "JSON config file (model, experiment, runtime blocks)");
  auto* seed_opt = run->add_option("--seed", seed, "master seed");
  auto* samples_opt = run->add_option("--samples", samples, "realization count M");
  auto* workers_opt = run->add_option("--workers", workers, "worker threads (results do not depend on it)");
  auto* out_opt = run->add_option("--out", out, "output file (default: $RANDOP_OUTPUT_DIR/<experiment>.<ext> or stdout)");
  auto* format_opt = run->add_option("--format", format, "json-lines or csv");
  auto* exp_opt = run->add_option("--experiment", experiment, "experiment type override")
                      ->check(CLI::IsMember(randop::cli::experiment_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : randop::cli::kConfigError;
  }

  if (*seed_opt) ov.seed = seed;
  if (*samples_opt) ov.samples = samples;
  if (*workers_opt) ov.workers = workers;
  if (*out_opt) ov.out = out;
  if (*format_opt) ov.format = format;
  if (*exp_opt) ov.experiment = experiment;
  std::optional<std::string> config_path;
  if (!config.empty()) config_path = config;
  return randop::cli::run(config_path, ov, std::cout, std::cerr);
}
