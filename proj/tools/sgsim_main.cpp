// Command-line front end: sgsim <command> [--config PATH] [--out DIR] [--set key=value]...

#include <iostream>

#include "CLI11.hpp"
#include "sgsim/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Free-electron Stern-Gerlach simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  auto* config_opt = app.add_option("--config", config_path, "flat key = value config file")
                         ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "override one key (key=value), repeatable")
      ->allow_extra_args(false);
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (0 = all cores)");

  const std::pair<const char*, const char*> commands[] = {
      {"table1", "voltage -> velocity, energy, momentum, wavelength table"},
      {"fieldmap", "two-wire field inhomogeneity map (CSV + PGM)"},
      {"scenario", "propagate a beam to the screen and measure the spin split"},
      {"gradient-sweep", "one scenario per gradient in `gradients`"},
      {"voltage-sweep", "one scenario per gun voltage in `voltages`"},
      {"required-gradient", "gradient needed for `target_split`"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  sgsim::RunConfig cfg;
  cfg.command = *sgsim::parse_command(app.get_subcommands().front()->get_name());
  if (*config_opt) cfg.input_path = config_path;
  cfg.output_dir = out_dir;
  cfg.overrides = overrides;
  if (*seed_opt) cfg.seed = seed;
  if (*threads_opt) cfg.threads = threads;
  return sgsim::run(cfg, std::cout, std::cerr);
}
