// Command-line front end for the private read-update-write simulator.
//
//   pruw run    --config demo.cfg --out results/
//   pruw verify --config demo.cfg
//   pruw audit  --config audit.cfg --trials 20000
//   pruw costs  --config demo.cfg
//
// Exit codes: 0 success, 1 check failure, 2 usage/config error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pruw/driver.hpp"
#include "pruw/error.hpp"

namespace {

pruw::NoiseControls controls_from_name(const std::string& name) {
  pruw::NoiseControls controls;
  if (name == "none") {
    return controls;
  }
  if (name == "zero-query-noise") {
    controls.zero_query_noise = true;
  } else if (name == "zero-update-noise") {
    controls.zero_update_noise = true;
  } else if (name == "zero-storage-noise") {
    controls.zero_storage_noise = true;
  } else if (name == "zero-reversing-noise") {
    controls.zero_reversing_noise = true;
  } else if (name == "identity-permutation") {
    controls.identity_permutation = true;
  } else {
    throw pruw::ConfigError("unknown sabotage mode: " + name);
  }
  return controls;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"private read-update-write simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::string sabotage = "none";
  long trials = 0;
  std::uint64_t seed_override = 0;
  bool have_seed = false;
  bool no_verify = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (key = value)")
        ->required();
    cmd->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { have_seed = true; });
  };

  CLI::App* run = app.add_subcommand("run", "simulate rounds, write CSVs");
  add_common(run);
  run->add_option("--out", out_dir, "output directory for CSV files");
  run->add_option("--sabotage", sabotage,
                  "deliberate leak switch (negative testing)");
  run->add_flag("--no-verify", no_verify, "skip per-round storage checks");

  CLI::App* verify = app.add_subcommand("verify", "run and check storage");
  add_common(verify);
  verify->add_option("--sabotage", sabotage,
                     "deliberate leak switch (negative testing)");

  CLI::App* audit = app.add_subcommand("audit", "run privacy audits");
  add_common(audit);
  audit->add_option("--trials", trials, "statistical trials override");

  CLI::App* costs = app.add_subcommand("costs", "print cost tables");
  add_common(costs);

  CLI11_PARSE(app, argc, argv);

  try {
    pruw::RunConfig config = pruw::load_run_config(config_path);
    if (have_seed) {
      config.system.seed = seed_override;
    }
    if (trials > 0) {
      config.trials = trials;
    }
    if (no_verify) {
      config.verify = false;
    }
    const pruw::NoiseControls controls = controls_from_name(sabotage);

    if (run->parsed()) {
      return pruw::cmd_run(config, out_dir, controls, std::cout);
    }
    if (verify->parsed()) {
      return pruw::cmd_verify(config, controls, std::cout);
    }
    if (audit->parsed()) {
      return pruw::cmd_audit(config, std::cout);
    }
    return pruw::cmd_costs(config, std::cout);
  } catch (const pruw::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
