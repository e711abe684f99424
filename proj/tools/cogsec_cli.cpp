#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cogsec/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cognitive-security scenario simulator"};
  app.require_subcommand(1);

  cogsec::RunOptions run;
  std::string run_ref;
  std::uint64_t run_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write stage outputs");
  run_cmd->add_option("--config", run.config, "Config file or preset name")->required();
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  auto* run_ref_opt = run_cmd->add_option("--ref", run_ref, "Reference series CSV (illusory truth)");
  auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "Override the config seed");

  cogsec::SweepOptions sweep;
  std::uint64_t sweep_seed = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over a range of one config field");
  sweep_cmd->add_option("--config", sweep.config, "Config file or preset name")->required();
  sweep_cmd->add_option("--out", sweep.out, "Output directory")->required();
  sweep_cmd->add_option("--param", sweep.param, "Dotted config field, e.g. resources.bias")->required();
  sweep_cmd->add_option("--range", sweep.range, "start:stop:step (stop inclusive) or a single value")->required();
  auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "Base seed; row i uses seed + i");

  cogsec::FitOptions fit;
  std::uint64_t fit_seed = 0;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the softmax inverse temperature to a reference series");
  fit_cmd->add_option("--config", fit.config, "Illusory-truth config file or preset name")->required();
  fit_cmd->add_option("--ref", fit.ref, "Reference series CSV")->required();
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();
  auto* fit_seed_opt = fit_cmd->add_option("--seed", fit_seed, "Override the config seed");

  cogsec::InfoOptions info;
  std::string subset;
  auto* info_cmd = app.add_subcommand("info", "Fisher information of a gaussian observation model");
  info_cmd->add_option("--gaussian-sigma", info.gaussian_sigma, "Observation noise sigma")->capture_default_str();
  info_cmd->add_option("--n", info.n, "Number of iid observations")->required();
  auto* subset_opt = info_cmd->add_option("--subset", subset, "Comma-separated zero-based utilizable indices");
  info_cmd->add_option("--x", info.x, "Evaluation point")->capture_default_str();
  info_cmd->add_flag("--monte-carlo", info.monte_carlo, "Monte Carlo expectation for the numerical estimate");
  info_cmd->add_option("--draws", info.draws, "Monte Carlo draws")->capture_default_str();
  info_cmd->add_option("--seed", info.seed, "Monte Carlo seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cogsec::kExitInput;
  }

  if (*run_cmd) {
    if (*run_ref_opt) run.ref = run_ref;
    if (*run_seed_opt) run.seed = run_seed;
    return cogsec::cmd_run(run, std::cerr);
  }
  if (*sweep_cmd) {
    if (*sweep_seed_opt) sweep.seed = sweep_seed;
    return cogsec::cmd_sweep(sweep, std::cerr);
  }
  if (*fit_cmd) {
    if (*fit_seed_opt) fit.seed = fit_seed;
    return cogsec::cmd_fit(fit, std::cerr);
  }
  if (*subset_opt) info.subset = subset;
  return cogsec::cmd_info(info, std::cout, std::cerr);
}
