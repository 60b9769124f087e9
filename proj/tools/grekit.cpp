// grekit: entropy-inequality checks and GRE simulations.
//
//   grekit verify-lr --seed 7 --trials 1000 --out out/
//   grekit simulate-growth --preset binary-fragmentation --out out/
//   grekit simulate-transport --config slab.json --out out/

#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "grekit/cli.hpp"

int main(int argc, char** argv) {
  using namespace grekit::cli;

  CLI::App app{"Relative entropy inequalities for positive operators and semigroups"};
  app.require_subcommand(1);

  RunManifest manifest;
  std::string config;
  std::string preset;
  std::string out = ".";

  const std::pair<Command, const char*> commands[] = {
      {Command::VerifyLr, "fuzz the pointwise perspective inequality for positive matrices"},
      {Command::VerifyCsiszar, "fuzz the integrated inequality for stochastic operators"},
      {Command::PowerIterate, "relative entropy along powers of a stochastic matrix"},
      {Command::SimulateGrowth, "growth-fragmentation run with a discrete dual weight"},
      {Command::SimulateTransport, "1-D slab transport run with absorbing ends"},
  };
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(command_name(cmd), help);
    sub->add_option("--config", config, "JSON config file");
    sub->add_option("--seed", manifest.seed, "seed for generated trials")->default_val(0);
    sub->add_option("--trials", manifest.trials, "number of fuzz trials")->default_val(1);
    sub->add_option("--out", out, "output directory")->default_val(".");
    if (cmd == Command::SimulateGrowth || cmd == Command::SimulateTransport) {
      sub->add_option("--preset", preset, "named model preset");
    }
    sub->callback([&manifest, c = cmd] { manifest.command = c; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  if (!config.empty()) manifest.config_path = config;
  if (!preset.empty()) manifest.preset = preset;
  manifest.output_dir = out;
  return run(manifest, std::cout, std::cerr);
}
