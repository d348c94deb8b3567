#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "heraldsim/config.hpp"
#include "heraldsim/estimation.hpp"

namespace heraldsim::harness {

// Command exit codes, also used by the CLI process.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericError = 3;

/// Parses "start:stop:step" (or a single value) into an inclusive grid.
std::vector<double> parse_grid(const std::string& spec);

/// Runs a Klyshko calibration at transmission 1 with a seed derived from the
/// config's master seed, so calibration trials never reuse measurement trials.
est::CalibrationRecord run_calibration(const ExperimentConfig& cfg);

/// Analytic sweep: advantage vs transmission for the ideal probe and four
/// degraded variants (setup efficiency 0.4/0.6, each with and without
/// matching heralding leakage). CSV to `out`.
int cmd_sweep_analytic(const std::optional<ExperimentConfig>& cfg,
                       const std::vector<double>& grid, std::ostream& out);

/// One experiment: calibration, `repetitions` trials, per-trial CSV rows and
/// a summary with the full precision report. Optionally dumps raw time tags,
/// one file per trial, under tags_dir.
int cmd_run_experiment(const ExperimentConfig& cfg, std::ostream& out,
                       const std::string& tags_dir = {});

/// Advantage vs transmission sweep: one calibration at transmission 1, then
/// `repetitions` trials per grid point. The analytic reference column is
/// computed from the measured calibration values, the same way the theory
/// curve of the experiment is drawn from characterized efficiencies.
int cmd_sweep_experiment(const ExperimentConfig& cfg,
                         const std::vector<double>& grid, std::ostream& out);

/// Heralded-g2 measurement; requires hbt_mode. Prints the pooled g2, its
/// batch standard error and the accidental-rate prediction
/// 2 * pair_rate * window.
int cmd_g2(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace heraldsim::harness
