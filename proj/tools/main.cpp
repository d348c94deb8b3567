// heraldsim command-line front end: analytic sweeps, Monte Carlo experiment
// runs, advantage sweeps and heralded-g2 measurements, all emitted as CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "heraldsim/config_io.hpp"
#include "heraldsim/harness.hpp"

namespace {

using heraldsim::ConfigError;
using heraldsim::ExperimentConfig;

struct CommonOpts {
  std::string config_path;
  std::string profile;
  std::string out_path;
  std::string switch_mode;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config file");
  cmd->add_option("--profile", opts.profile, "built-in profile")
      ->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
  cmd->add_option("--switch", opts.switch_mode, "override switch state")
      ->check(CLI::IsMember({"on", "off"}));
  auto* seed_opt = cmd->add_option("--seed", opts.seed, "override master seed");
  cmd->parse_complete_callback([&opts, seed_opt] { opts.seed_given = seed_opt->count() > 0; });
}

ExperimentConfig resolve_config(const CommonOpts& opts, bool seed_required) {
  if (!opts.config_path.empty() && !opts.profile.empty())
    throw ConfigError("--config and --profile are mutually exclusive");
  ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = heraldsim::load_config_file(opts.config_path);
  } else if (opts.profile == "paper") {
    cfg = heraldsim::paper_profile();
  } else {
    cfg = heraldsim::desk_profile();
  }
  if (opts.seed_given) cfg.master_seed = opts.seed;
  if (opts.switch_mode == "on") cfg.optical_switch.enabled = true;
  if (opts.switch_mode == "off") cfg.optical_switch.enabled = false;
  if (seed_required && !cfg.master_seed)
    throw ConfigError("no master_seed in the config and no --seed given");
  return cfg;
}

// Runs `body(out)` with --out resolved to a file stream or stdout.
template <typename Body>
int with_output(const std::string& out_path, Body&& body) {
  if (out_path.empty()) return body(std::cout);
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "config error: cannot open output file '" << out_path << "'\n";
    return heraldsim::harness::kExitConfigError;
  }
  return body(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and estimation toolkit for feed-forward gated "
               "single-photon transmission measurement"};
  app.require_subcommand(1);
  int exit_code = 0;

  // sweep-analytic
  auto* sweep_analytic = app.add_subcommand(
      "sweep-analytic", "advantage-vs-transmission theory curves as CSV");
  CommonOpts sa_opts;
  std::string sa_grid = "0:1:0.1";
  add_common(sweep_analytic, sa_opts);
  sweep_analytic->add_option("--grid", sa_grid, "transmission grid start:stop:step");
  sweep_analytic->callback([&] {
    exit_code = with_output(sa_opts.out_path, [&](std::ostream& out) {
      try {
        std::optional<ExperimentConfig> cfg;
        if (!sa_opts.config_path.empty())
          cfg = heraldsim::load_config_file(sa_opts.config_path);
        return heraldsim::harness::cmd_sweep_analytic(
            cfg, heraldsim::harness::parse_grid(sa_grid), out);
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return heraldsim::harness::kExitConfigError;
      }
    });
  });

  // run
  auto* run = app.add_subcommand("run", "one Monte Carlo experiment as per-trial CSV");
  CommonOpts run_opts;
  std::string tags_dir;
  add_common(run, run_opts);
  run->add_option("--tags", tags_dir, "directory for raw time-tag files, one per trial");
  run->callback([&] {
    exit_code = with_output(run_opts.out_path, [&](std::ostream& out) {
      try {
        const ExperimentConfig cfg = resolve_config(run_opts, true);
        return heraldsim::harness::cmd_run_experiment(cfg, out, tags_dir);
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return heraldsim::harness::kExitConfigError;
      }
    });
  });

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "simulated + analytic advantage over a transmission grid");
  CommonOpts sweep_opts;
  std::string sweep_grid = "0.65:1.0:0.05";
  add_common(sweep, sweep_opts);
  sweep->add_option("--grid", sweep_grid, "transmission grid start:stop:step");
  sweep->callback([&] {
    exit_code = with_output(sweep_opts.out_path, [&](std::ostream& out) {
      try {
        const ExperimentConfig cfg = resolve_config(sweep_opts, true);
        return heraldsim::harness::cmd_sweep_experiment(
            cfg, heraldsim::harness::parse_grid(sweep_grid), out);
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return heraldsim::harness::kExitConfigError;
      }
    });
  });

  // g2
  auto* g2 = app.add_subcommand("g2", "heralded second-order correlation (needs hbt_mode)");
  CommonOpts g2_opts;
  add_common(g2, g2_opts);
  g2->callback([&] {
    exit_code = with_output(g2_opts.out_path, [&](std::ostream& out) {
      try {
        const ExperimentConfig cfg = resolve_config(g2_opts, true);
        return heraldsim::harness::cmd_g2(cfg, out);
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return heraldsim::harness::kExitConfigError;
      }
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : heraldsim::harness::kExitConfigError;
  }
  return exit_code;
}
