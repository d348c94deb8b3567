#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace heraldsim::analytic {

/// Inverse variance per input photon. Singular limits are reported through
/// the divergent flag instead of an infinite value so callers must handle
/// them explicitly.
struct PrecisionValue {
  double value = 0.0;
  bool divergent = false;
};

/// Two-component mixture of vacuum and a single photon; what a lossy channel
/// leaves of a heralded single-photon state.
struct MixtureState {
  double p0 = 1.0;  ///< vacuum weight
  double p1 = 0.0;  ///< single-photon weight
};

/// One row of an advantage-vs-transmission curve. r_analytic is +infinity at
/// a divergent point; the simulated fields are absent for purely analytic
/// sweeps.
struct CurvePoint {
  double eta = 0.0;
  double r_analytic = 0.0;
  std::optional<double> r_simulated;
  std::optional<double> r_stderr;
  std::optional<std::uint64_t> n_trials;
};

/// Best precision per photon with a coherent probe: nu * n_in / eta.
PrecisionValue shot_noise_precision(double eta, double n_in, double nu);

/// Precision of an N-photon Fock probe: nu * n_in / (eta (1 - eta)).
/// Divergent at eta == 1.
PrecisionValue fock_precision(double eta, double n_in, double nu);

/// P(n_out | n_in, eta) for Bernoulli loss of each photon. Evaluated in
/// log space; stable up to n_in ~ 1e6.
double binomial_pmf(std::uint64_t n_out, std::uint64_t n_in, double eta);

/// State of a heralded single photon after a channel of efficiency eta_i.
MixtureState lossy_fock_state(double eta_i);

/// Precision of the loss-degraded, imperfectly heralded probe:
/// eta_s / (eta (1 - eta * eta_setup)).
PrecisionValue degraded_precision(double eta, double eta_setup, double eta_s);

/// Ratio of degraded-probe precision to the coherent baseline at equal
/// photon budget: eta_s / (1 - eta * eta_setup). Values above 1 mean the
/// gated single-photon strategy beats shot noise.
double advantage_ratio(double eta, double eta_setup, double eta_s);

/// Threshold for any advantage: eta_i_total + eta_s > 1 (strict), with
/// eta_i_total the full idler Klyshko efficiency including the sample.
bool jakeman_condition(double eta_i_total, double eta_s);

/// advantage_ratio evaluated over a transmission grid. Divergent points
/// (eta * eta_setup == 1) are reported as +infinity.
std::vector<CurvePoint> sweep_advantage_curve(const std::vector<double>& eta_grid,
                                              double eta_setup, double eta_s);

}  // namespace heraldsim::analytic
