#include "heraldsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "heraldsim/analytic.hpp"
#include "heraldsim/config_io.hpp"
#include "heraldsim/montecarlo.hpp"

namespace heraldsim::harness {

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Calibration trials must not be the same random streams as measurement
// trials: at transmission 1 they would coincide bit for bit and the estimator
// would degenerate.
std::uint64_t calibration_seed(std::uint64_t master_seed) {
  return splitmix64(master_seed ^ 0x6A09E667F3BCC909ull);
}

void require_runnable(const ExperimentConfig& cfg) {
  const ValidationReport report = validate(cfg);
  if (!report.ok()) {
    std::string msg = "invalid config:";
    for (const auto& violation : report.violations) msg += "\n  " + violation;
    throw ConfigError(msg);
  }
  for (const auto& warning : report.warnings)
    std::cerr << "warning: " << warning << "\n";
  if (!cfg.master_seed) throw ConfigError("master_seed is not set");
}

void echo_config(const ExperimentConfig& cfg, std::ostream& out) {
  std::istringstream lines(serialize_config(cfg));
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << "\n";
}

double accidental_rate(const ExperimentConfig& cfg) {
  return cfg.dark_correction
             ? est::dark_accidentals_per_herald(cfg.idler_detector, cfg.coincidence)
             : 0.0;
}

unsigned worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : std::min(hw, 8u);
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumericError;
  }
}

void export_tags(const mc::TrialResult& trial, std::uint64_t index,
                 const std::filesystem::path& dir) {
  char name[32];
  std::snprintf(name, sizeof(name), "trial_%06llu.tags",
                static_cast<unsigned long long>(index));
  std::ofstream out(dir / name);
  if (!out) throw std::runtime_error("cannot write time-tag file in " + dir.string());
  // merge channels into one stream ordered by time
  std::vector<std::pair<double, Channel>> tags;
  for (const auto& stream : trial.streams)
    for (double t : stream.timestamps) tags.emplace_back(t, stream.channel);
  std::stable_sort(tags.begin(), tags.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [t, channel] : tags)
    out << channel_name(channel) << "\t" << fmt(t) << "\n";
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  const auto bad = [&] { return ConfigError("bad grid spec '" + spec + "', want start:stop:step"); };
  std::vector<double> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t colon = spec.find(':', begin);
    const std::string token = spec.substr(begin, colon == std::string::npos
                                                     ? std::string::npos
                                                     : colon - begin);
    char* end = nullptr;
    const double x = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') throw bad();
    parts.push_back(x);
    if (colon == std::string::npos) break;
    begin = colon + 1;
  }

  if (parts.size() == 1) return {parts[0]};
  if (parts.size() != 3) throw bad();
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (!(step > 0.0) || stop < start) throw bad();

  std::vector<double> grid;
  const double tol = step * 1e-9;
  for (int k = 0;; ++k) {
    double v = start + k * step;
    if (v > stop + tol) break;
    if (std::abs(v - stop) <= tol) v = stop;
    grid.push_back(v);
  }
  return grid;
}

est::CalibrationRecord run_calibration(const ExperimentConfig& cfg) {
  ExperimentConfig cal_cfg = cfg;
  cal_cfg.sample.transmission = 1.0;
  cal_cfg.master_seed = calibration_seed(*cfg.master_seed);
  const auto trials = mc::run_experiment(cal_cfg, worker_count());
  return est::calibrate(trials, accidental_rate(cfg));
}

int cmd_sweep_analytic(const std::optional<ExperimentConfig>& cfg,
                       const std::vector<double>& grid, std::ostream& out) {
  return run_guarded([&] {
    for (double eta : grid) {
      if (!(eta >= 0.0 && eta <= 1.0))
        throw ConfigError("grid transmission out of [0,1]");
    }
    if (cfg) {
      const ValidationReport report = validate(*cfg);
      if (!report.ok()) {
        std::string msg = "invalid config:";
        for (const auto& violation : report.violations) msg += "\n  " + violation;
        throw ConfigError(msg);
      }
      echo_config(*cfg, out);
    }
    struct Curve {
      const char* name;
      double eta_setup;
      double eta_s;
    };
    // ideal probe plus the two setup-loss cases, each also with matching
    // heralding leakage
    const Curve curves[] = {
        {"r_ideal", 1.0, 1.0},
        {"r_setup_0p4", 0.4, 1.0},
        {"r_setup_0p6", 0.6, 1.0},
        {"r_setup_0p4_leak_0p4", 0.4, 0.6},
        {"r_setup_0p6_leak_0p6", 0.6, 0.4},
    };
    out << "eta";
    for (const auto& c : curves) out << "," << c.name;
    out << "\n";
    for (double eta : grid) {
      out << fmt(eta);
      for (const auto& c : curves) {
        const auto points = analytic::sweep_advantage_curve({eta}, c.eta_setup, c.eta_s);
        out << "," << fmt(points[0].r_analytic);
      }
      out << "\n";
    }
  });
}

int cmd_run_experiment(const ExperimentConfig& cfg, std::ostream& out,
                       const std::string& tags_dir) {
  return run_guarded([&] {
    require_runnable(cfg);
    const double acc = accidental_rate(cfg);
    const est::CalibrationRecord cal = run_calibration(cfg);

    std::vector<TrialCounts> trials;
    if (tags_dir.empty()) {
      trials = mc::run_experiment(cfg, worker_count());
    } else {
      const std::filesystem::path dir(tags_dir);
      std::filesystem::create_directories(dir);
      trials.reserve(cfg.repetitions);
      for (std::uint64_t i = 0; i < cfg.repetitions; ++i) {
        const mc::TrialResult trial = mc::simulate_trial(cfg, i, true);
        export_tags(trial, i, dir);
        trials.push_back(trial.counts);
      }
    }

    const double eta_s = est::heralding_fidelity(trials, acc);
    const est::PrecisionReport report =
        est::precision_report(trials, cal, cfg.idler_detector, eta_s, acc);

    out << "# heraldsim run\n";
    echo_config(cfg, out);
    out << "# calibration.eta_setup_measured = " << fmt(cal.eta_setup_measured) << "\n";
    out << "# calibration.std_error = " << fmt(cal.std_error) << "\n";
    out << "# heralding_fidelity_measured = " << fmt(eta_s) << "\n";
    out << "trial,n_s,n_i,n_c,eta_hat\n";
    for (std::size_t i = 0; i < trials.size(); ++i) {
      const TrialCounts& t = trials[i];
      const double corrected =
          std::max(static_cast<double>(t.n_coincidence) -
                       acc * static_cast<double>(t.n_herald), 0.0);
      const double eta_hat = est::estimate_transmission(
          corrected / static_cast<double>(t.n_herald), cal);
      out << i << "," << t.n_herald << "," << t.n_idler << "," << t.n_coincidence
          << "," << fmt(eta_hat) << "\n";
    }
    out << "# summary\n";
    out << "eta_hat,var_eta,n_probe,precision_per_photon,advantage,advantage_stderr\n";
    out << fmt(report.eta_hat) << "," << fmt(report.var_eta) << ","
        << fmt(report.n_probe) << "," << fmt(report.precision_per_photon) << ","
        << fmt(report.advantage) << "," << fmt(report.advantage_stderr) << "\n";
  });
}

int cmd_sweep_experiment(const ExperimentConfig& cfg,
                         const std::vector<double>& grid, std::ostream& out) {
  return run_guarded([&] {
    require_runnable(cfg);
    if (grid.empty()) throw ConfigError("empty transmission grid");
    const double acc = accidental_rate(cfg);
    const est::CalibrationRecord cal = run_calibration(cfg);

    std::vector<std::vector<TrialCounts>> per_point;
    per_point.reserve(grid.size());
    std::vector<TrialCounts> pooled;
    for (double eta : grid) {
      ExperimentConfig point_cfg = cfg;
      point_cfg.sample.transmission = eta;
      per_point.push_back(mc::run_experiment(point_cfg, worker_count()));
      pooled.insert(pooled.end(), per_point.back().begin(), per_point.back().end());
    }
    // one heralding fidelity for the whole sweep, like a setup characterization
    const double eta_s = est::heralding_fidelity(pooled, acc);

    out << "# heraldsim sweep\n";
    echo_config(cfg, out);
    out << "# calibration.eta_setup_measured = " << fmt(cal.eta_setup_measured) << "\n";
    out << "# heralding_fidelity_measured = " << fmt(eta_s) << "\n";
    out << "eta,r_analytic,r_simulated,r_stderr,n_trials\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const est::PrecisionReport report = est::precision_report(
          per_point[k], cal, cfg.idler_detector, eta_s, acc);
      const double r_analytic =
          grid[k] * cal.eta_setup_measured >= 1.0
              ? std::numeric_limits<double>::infinity()
              : analytic::advantage_ratio(grid[k], cal.eta_setup_measured, eta_s);
      out << fmt(grid[k]) << "," << fmt(r_analytic) << "," << fmt(report.advantage)
          << "," << fmt(report.advantage_stderr) << "," << per_point[k].size() << "\n";
    }
  });
}

int cmd_g2(const ExperimentConfig& cfg, std::ostream& out) {
  return run_guarded([&] {
    if (!cfg.hbt_mode) throw ConfigError("g2 requires hbt_mode = true");
    require_runnable(cfg);
    const auto trials = mc::run_experiment(cfg, worker_count());
    const est::G2Report report = est::g2_batch(trials);
    const double prediction = 2.0 * cfg.source.pair_rate * cfg.coincidence.window_s;

    out << "# heraldsim g2\n";
    echo_config(cfg, out);
    out << "g2,g2_stderr,accidental_prediction\n";
    out << fmt(report.g2) << "," << fmt(report.std_error) << "," << fmt(prediction)
        << "\n";
  });
}

}  // namespace heraldsim::harness
