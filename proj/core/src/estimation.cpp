#include "heraldsim/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace heraldsim::est {

namespace {

bool is_sorted_stream(const std::vector<double>& v) {
  return std::is_sorted(v.begin(), v.end());
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

double corrected_coincidences(const TrialCounts& t, double accidental_per_herald) {
  const double corrected = static_cast<double>(t.n_coincidence) -
                           accidental_per_herald * static_cast<double>(t.n_herald);
  return std::max(corrected, 0.0);
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> match_coincidences(
    const std::vector<double>& a, const std::vector<double>& b,
    const CoincidenceConfig& cfg) {
  if (!is_sorted_stream(a) || !is_sorted_stream(b))
    throw std::invalid_argument("coincidence streams must be sorted");
  if (!(cfg.window_s > 0.0)) throw std::invalid_argument("coincidence window must be > 0");

  const double half = cfg.window_s / 2.0;
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double d = b[j] - a[i] - cfg.nominal_offset_s;
    if (d < -half) {
      ++j;
    } else if (d >= half) {
      ++i;
    } else {
      matches.emplace_back(i, j);
      ++i;
      ++j;
    }
  }
  return matches;
}

std::uint64_t count_coincidences(const TimeTagStream& a, const TimeTagStream& b,
                                 const CoincidenceConfig& cfg) {
  return match_coincidences(a.timestamps, b.timestamps, cfg).size();
}

double klyshko(std::uint64_t n_coinc, std::uint64_t n_singles) {
  if (n_singles == 0) throw NumericError("klyshko: empty trial (no singles)");
  return static_cast<double>(n_coinc) / static_cast<double>(n_singles);
}

double estimate_transmission(double trial_klyshko, const CalibrationRecord& cal) {
  if (!(cal.eta_setup_measured > 0.0))
    throw NumericError("estimate_transmission: calibration efficiency is zero");
  return trial_klyshko / cal.eta_setup_measured;
}

double probe_photon_count(double n_idler, double eta_det, double eta_hat,
                          double eta_s, double dark) {
  const double divisor = eta_det * eta_hat * eta_s;
  if (!(divisor > 0.0))
    throw NumericError("probe_photon_count: nonpositive efficiency divisor");
  return n_idler / divisor - dark;
}

double dark_accidentals_per_herald(const DetectorConfig& idler_det,
                                   const CoincidenceConfig& cc) {
  return idler_det.dark_rate * cc.window_s;
}

CalibrationRecord calibrate(const std::vector<TrialCounts>& trials,
                            double accidental_per_herald) {
  if (trials.empty()) throw NumericError("calibrate: no trials");
  double sum_c = 0.0;
  double sum_s = 0.0;
  std::vector<double> per_trial;
  per_trial.reserve(trials.size());
  for (const auto& t : trials) {
    if (t.n_herald == 0) throw NumericError("calibrate: empty trial (no heralds)");
    const double c = corrected_coincidences(t, accidental_per_herald);
    sum_c += c;
    sum_s += static_cast<double>(t.n_herald);
    per_trial.push_back(c / static_cast<double>(t.n_herald));
  }
  CalibrationRecord cal;
  cal.eta_setup_measured = sum_c / sum_s;
  cal.n_trials = trials.size();
  cal.std_error = trials.size() > 1
                      ? std::sqrt(sample_variance(per_trial) /
                                  static_cast<double>(trials.size()))
                      : 0.0;
  return cal;
}

double heralding_fidelity(const std::vector<TrialCounts>& trials,
                          double accidental_per_herald) {
  double sum_c = 0.0;
  double sum_i = 0.0;
  for (const auto& t : trials) {
    sum_c += corrected_coincidences(t, accidental_per_herald);
    sum_i += static_cast<double>(t.n_idler);
  }
  if (!(sum_i > 0.0)) throw NumericError("heralding_fidelity: no idler counts");
  return sum_c / sum_i;
}

namespace {

struct Span {
  const TrialCounts* data;
  std::size_t size;
};

// Advantage statistic of one contiguous block of trials. Shared calibration
// and heralding fidelity; means and variance from the block itself.
double advantage_of(const Span& span, const CalibrationRecord& cal,
                    const DetectorConfig& det, double eta_s_measured,
                    double accidental_per_herald, PrecisionReport* full) {
  std::vector<double> eta_series;
  eta_series.reserve(span.size);
  double sum_i = 0.0;
  double sum_dark = 0.0;
  for (std::size_t k = 0; k < span.size; ++k) {
    const TrialCounts& t = span.data[k];
    if (t.n_herald == 0) throw NumericError("precision_report: empty trial (no heralds)");
    const double eta_i = corrected_coincidences(t, accidental_per_herald) /
                         static_cast<double>(t.n_herald);
    eta_series.push_back(estimate_transmission(eta_i, cal));
    sum_i += static_cast<double>(t.n_idler);
    sum_dark += t.dark_estimate;
  }
  const double eta_hat = mean(eta_series);
  const double var_eta = sample_variance(eta_series);
  if (!(var_eta > 0.0))
    throw NumericError("precision_report: degenerate batch with zero variance");
  if (!(eta_hat > 0.0))
    throw NumericError("precision_report: nonpositive transmission estimate");
  const double n_probe =
      probe_photon_count(sum_i / static_cast<double>(span.size), det.efficiency,
                         eta_hat, eta_s_measured, sum_dark / static_cast<double>(span.size));
  if (!(n_probe > 0.0)) throw NumericError("precision_report: nonpositive probe count");
  const double precision_per_photon = 1.0 / (var_eta * n_probe);
  const double advantage = precision_per_photon * eta_hat;
  if (full) {
    full->eta_hat = eta_hat;
    full->var_eta = var_eta;
    full->n_probe = n_probe;
    full->precision_per_photon = precision_per_photon;
    full->advantage = advantage;
  }
  return advantage;
}

}  // namespace

PrecisionReport precision_report(const std::vector<TrialCounts>& trials,
                                 const CalibrationRecord& cal,
                                 const DetectorConfig& det, double eta_s_measured,
                                 double accidental_per_herald) {
  if (trials.size() < 2) throw NumericError("precision_report: need at least 2 trials");

  PrecisionReport report;
  advantage_of({trials.data(), trials.size()}, cal, det, eta_s_measured,
               accidental_per_herald, &report);

  // batch-means error bar: contiguous bins, each at least two trials
  const std::size_t n_bins = std::min<std::size_t>(10, trials.size() / 2);
  if (n_bins >= 2) {
    std::vector<double> bin_adv;
    bin_adv.reserve(n_bins);
    const std::size_t base = trials.size() / n_bins;
    const std::size_t extra = trials.size() % n_bins;
    std::size_t begin = 0;
    for (std::size_t b = 0; b < n_bins; ++b) {
      const std::size_t len = base + (b < extra ? 1 : 0);
      bin_adv.push_back(advantage_of({trials.data() + begin, len}, cal, det,
                                     eta_s_measured, accidental_per_herald, nullptr));
      begin += len;
    }
    report.advantage_stderr =
        std::sqrt(sample_variance(bin_adv) / static_cast<double>(n_bins));
  } else {
    report.advantage_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  if (!std::isfinite(report.advantage))
    throw NumericError("precision_report: non-finite advantage");
  return report;
}

double g2_heralded(std::uint64_t n_s, std::uint64_t n_sa, std::uint64_t n_sb,
                   std::uint64_t n_sab) {
  if (n_sa == 0 || n_sb == 0)
    throw NumericError("g2_heralded: zero pairwise coincidences");
  return static_cast<double>(n_sab) * static_cast<double>(n_s) /
         (static_cast<double>(n_sa) * static_cast<double>(n_sb));
}

namespace {

double pooled_g2(const TrialCounts* data, std::size_t size) {
  std::uint64_t s = 0, sa = 0, sb = 0, sab = 0;
  for (std::size_t k = 0; k < size; ++k) {
    s += data[k].n_herald;
    sa += data[k].n_coinc_herald_a;
    sb += data[k].n_coinc_herald_b;
    sab += data[k].n_triple;
  }
  return g2_heralded(s, sa, sb, sab);
}

}  // namespace

G2Report g2_batch(const std::vector<TrialCounts>& trials, std::size_t n_bins) {
  if (trials.empty()) throw NumericError("g2_batch: no trials");
  G2Report report;
  report.g2 = pooled_g2(trials.data(), trials.size());

  const std::size_t bins = std::min(n_bins, trials.size());
  if (bins >= 2) {
    std::vector<double> bin_g2;
    bin_g2.reserve(bins);
    const std::size_t base = trials.size() / bins;
    const std::size_t extra = trials.size() % bins;
    std::size_t begin = 0;
    for (std::size_t b = 0; b < bins; ++b) {
      const std::size_t len = base + (b < extra ? 1 : 0);
      bin_g2.push_back(pooled_g2(trials.data() + begin, len));
      begin += len;
    }
    report.std_error = std::sqrt(sample_variance(bin_g2) / static_cast<double>(bins));
  } else {
    report.std_error = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace heraldsim::est
