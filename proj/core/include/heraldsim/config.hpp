#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heraldsim/types.hpp"

namespace heraldsim {

/// Correlated pair source (CW-pumped, so emission is a homogeneous Poisson
/// process at pair_rate over one trial of `duration` seconds).
struct SourceConfig {
  double pair_rate = 9.0e3;  ///< emitted pairs per second, before any loss
  double duration = 0.2;     ///< seconds per trial
  /// Herald-arm collection+detection probability. The full signal chain lives
  /// here; the herald DetectorConfig models darks and dead time on top.
  double signal_channel_efficiency = 0.41;
  double wavelength_signal_nm = 792.0;  ///< metadata only
  double wavelength_idler_nm = 824.0;   ///< metadata only
};

struct SampleConfig {
  double transmission = 0.97;  ///< sample transmissivity in [0,1]
};

/// Idler arm between source and sample: fiber delay plus every loss that is
/// not the sample or the switch. setup_efficiency is the product of source
/// coupling and detection efficiency in that arm, which is what a Klyshko
/// calibration at transmission 1 measures.
struct IdlerChannelConfig {
  double setup_efficiency = 0.38;
  double delay_s = 1.1e-6;
};

/// Feed-forward optical switch. A herald click at t opens a hard gate
/// [t + electronic_latency_s, t + electronic_latency_s + gate_width_s).
/// When disabled the switch sits open and passes photons with
/// on_state_transmission.
struct SwitchConfig {
  bool enabled = true;
  double electronic_latency_s = 0.6e-6;
  double gate_width_s = 1.0e-6;
  double off_state_leakage = 0.0;      ///< pass probability while gate closed
  double on_state_transmission = 1.0;  ///< pass probability while gate open
};

/// Click detector: Bernoulli efficiency, Poisson dark counts, non-paralyzable
/// dead time. Shipped profiles keep efficiency at 1.0 because the arm chain
/// efficiencies already include detection.
struct DetectorConfig {
  double efficiency = 1.0;
  double dark_rate = 0.0;  ///< dark counts per second
  double dead_time_s = 0.0;
};

struct CoincidenceConfig {
  double window_s = 30.0e-9;         ///< full coincidence-window width
  double nominal_offset_s = 1.1e-6;  ///< expected idler-minus-herald arrival offset
};

/// Full parameterization of one experiment: source, channels, switch, sample,
/// detectors and the trial schedule.
struct ExperimentConfig {
  SourceConfig source;
  SampleConfig sample;
  IdlerChannelConfig idler_channel;
  SwitchConfig optical_switch;
  DetectorConfig herald_detector;
  DetectorConfig idler_detector;
  CoincidenceConfig coincidence;
  std::uint64_t repetitions = 3000;         ///< trials per run (>= 2 for a variance)
  std::optional<std::uint64_t> master_seed; ///< required before simulating
  bool hbt_mode = false;   ///< 50:50 splitter + two idler detectors for g2
  double jitter_std = 0.0; ///< relative std of per-trial setup-efficiency noise
  bool dark_correction = true;  ///< subtract expected dark accidentals from N_C
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

/// Checks every config invariant. Pure; returns all violations (empty list
/// means runnable) and warnings for legal but physically odd settings, e.g.
/// a delay shorter than the switch latency.
ValidationReport validate(const ExperimentConfig& cfg);

}  // namespace heraldsim
