#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "heraldsim/config.hpp"
#include "heraldsim/types.hpp"

namespace heraldsim::est {

/// Result of measuring the idler-arm Klyshko efficiency with the sample at
/// transmission 1.
struct CalibrationRecord {
  double eta_setup_measured = 0.0;
  std::uint64_t n_trials = 0;
  double std_error = 0.0;
};

/// Transmission estimate and its per-photon precision accounting for one
/// batch of trials.
struct PrecisionReport {
  double eta_hat = 0.0;          ///< batch-mean transmission estimate
  double var_eta = 0.0;          ///< unbiased variance of the per-trial estimates
  double n_probe = 0.0;          ///< mean probe photons per trial
  double precision_per_photon = 0.0;  ///< 1 / (var_eta * n_probe)
  double advantage = 0.0;        ///< precision_per_photon / (1 / eta_hat)
  double advantage_stderr = 0.0; ///< batch-means error of `advantage`
};

/// Greedy earliest-first one-to-one matching of two sorted tag lists.
/// Tags match when b[j] - a[i] - nominal_offset lies in [-window/2, window/2);
/// each tag is used at most once. Linear time. Returns matched index pairs.
std::vector<std::pair<std::size_t, std::size_t>> match_coincidences(
    const std::vector<double>& a, const std::vector<double>& b,
    const CoincidenceConfig& cfg);

std::uint64_t count_coincidences(const TimeTagStream& a, const TimeTagStream& b,
                                 const CoincidenceConfig& cfg);

/// Klyshko (heralding) efficiency: coincidences over opposite-arm singles.
double klyshko(std::uint64_t n_coinc, std::uint64_t n_singles);

/// Transmission from one trial's Klyshko efficiency against the calibrated
/// setup efficiency. Deliberately not clamped to [0,1]: clamping would bias
/// the variance the precision estimate is built on.
double estimate_transmission(double trial_klyshko, const CalibrationRecord& cal);

/// Mean probe photons from detected idler counts:
/// n_idler / (eta_det * eta_hat * eta_s) - dark.
double probe_photon_count(double n_idler, double eta_det, double eta_hat,
                          double eta_s, double dark);

/// Expected dark-count accidentals per herald inside the coincidence window;
/// subtracted from N_C when dark correction is on.
double dark_accidentals_per_herald(const DetectorConfig& idler_det,
                                   const CoincidenceConfig& cc);

/// Calibration from trials taken at transmission 1.
CalibrationRecord calibrate(const std::vector<TrialCounts>& trials,
                            double accidental_per_herald = 0.0);

/// Pooled heralding fidelity N_C / N_I of a trial batch.
double heralding_fidelity(const std::vector<TrialCounts>& trials,
                          double accidental_per_herald = 0.0);

/// Full precision accounting over a batch of trials: per-trial transmission
/// estimates, their unbiased variance, the probe-photon budget, and the
/// advantage over the coherent-state baseline 1/eta per photon. The error bar
/// is the batch-means standard error over (up to) 10 contiguous bins.
PrecisionReport precision_report(const std::vector<TrialCounts>& trials,
                                 const CalibrationRecord& cal,
                                 const DetectorConfig& det, double eta_s_measured,
                                 double accidental_per_herald = 0.0);

/// Heralded second-order correlation from triple coincidences:
/// g2 = N_SAB * N_S / (N_SA * N_SB).
double g2_heralded(std::uint64_t n_s, std::uint64_t n_sa, std::uint64_t n_sb,
                   std::uint64_t n_sab);

struct G2Report {
  double g2 = 0.0;
  double std_error = 0.0;
};

/// Pooled g2 over a trial batch with a batch-means error bar.
G2Report g2_batch(const std::vector<TrialCounts>& trials, std::size_t n_bins = 10);

}  // namespace heraldsim::est
