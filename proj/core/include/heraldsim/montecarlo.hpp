#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "heraldsim/config.hpp"
#include "heraldsim/rng.hpp"
#include "heraldsim/types.hpp"

namespace heraldsim::mc {

/// Disjoint, sorted, half-open [open, close) intervals during which the
/// switch gate is open.
struct GateSchedule {
  std::vector<std::pair<double, double>> intervals;

  bool contains(double t) const;
  /// Total open time intersected with [t0, t1], for duty-cycle oracles.
  double open_time_within(double t0, double t1) const;
};

/// Homogeneous Poisson emission times in [0, duration), sorted.
std::vector<double> generate_pair_emissions(double rate, double duration, RngStream& rng);

/// Keeps each event independently with probability p; order preserved.
std::vector<double> thin(const std::vector<double>& events, double p, RngStream& rng);

/// One gate per herald click at [t + latency, t + latency + width);
/// overlapping gates are merged.
GateSchedule build_gate_schedule(const std::vector<double>& herald_clicks,
                                 double latency, double width);

/// Passes each arrival with on_transmission inside an open gate and leakage
/// outside. A disabled switch sits open: every arrival sees on_transmission.
std::vector<double> apply_switch(const std::vector<double>& arrivals,
                                 const GateSchedule& schedule,
                                 double on_transmission, double leakage,
                                 bool enabled, RngStream& rng);

/// Detection: efficiency thinning, merge with a Poisson dark-count process,
/// then non-paralyzable dead-time filtering.
TimeTagStream detect(const std::vector<double>& arrivals, const DetectorConfig& det,
                     double duration, Channel channel, RngStream& rng);

struct TrialResult {
  TrialCounts counts;
  std::vector<TimeTagStream> streams;  ///< populated only when keep_tags
};

/// Simulates one trial of the full pipeline: pair emission, herald detection,
/// idler delay + setup loss, feed-forward gate, sample, idler detection
/// (50:50 split onto two detectors in HBT mode), then coincidence counting.
/// Deterministic in (cfg.master_seed, trial_index).
TrialResult simulate_trial(const ExperimentConfig& cfg, std::uint64_t trial_index,
                           bool keep_tags = false);

/// `repetitions` independent trials, stream ids 0..nu-1. Trial i is identical
/// whether run alone or in a batch.
std::vector<TrialCounts> run_experiment(const ExperimentConfig& cfg);

/// Same results as the sequential overload; trials distributed over threads.
std::vector<TrialCounts> run_experiment(const ExperimentConfig& cfg, unsigned n_threads);

}  // namespace heraldsim::mc
