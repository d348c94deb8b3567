#include "heraldsim/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace heraldsim::analytic {

namespace {

void require_probability(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument(std::string(name) + " out of [0,1]");
}

}  // namespace

PrecisionValue shot_noise_precision(double eta, double n_in, double nu) {
  require_probability(eta, "eta");
  if (!(n_in > 0.0)) throw std::invalid_argument("n_in must be > 0");
  if (!(nu >= 1.0)) throw std::invalid_argument("nu must be >= 1");
  if (eta == 0.0) throw std::domain_error("shot-noise precision singular at eta = 0");
  return {nu * n_in / eta, false};
}

PrecisionValue fock_precision(double eta, double n_in, double nu) {
  require_probability(eta, "eta");
  if (!(n_in >= 1.0)) throw std::invalid_argument("n_in must be >= 1");
  if (!(nu >= 1.0)) throw std::invalid_argument("nu must be >= 1");
  if (eta == 0.0) throw std::domain_error("Fock precision singular at eta = 0");
  if (eta == 1.0) return {std::numeric_limits<double>::infinity(), true};
  return {nu * n_in / (eta * (1.0 - eta)), false};
}

double binomial_pmf(std::uint64_t n_out, std::uint64_t n_in, double eta) {
  if (n_out > n_in) throw std::domain_error("binomial_pmf: n_out > n_in");
  require_probability(eta, "eta");
  if (eta == 0.0) return n_out == 0 ? 1.0 : 0.0;
  if (eta == 1.0) return n_out == n_in ? 1.0 : 0.0;
  // Log-space with extended precision keeps the pmf accurate enough that
  // summing ~1e3 terms stays inside 1e-12 of 1.
  const long double n = static_cast<long double>(n_in);
  const long double k = static_cast<long double>(n_out);
  const long double log_pmf = std::lgamma(n + 1) - std::lgamma(k + 1) -
                              std::lgamma(n - k + 1) +
                              k * std::log(static_cast<long double>(eta)) +
                              (n - k) * std::log1p(static_cast<long double>(-eta));
  return static_cast<double>(std::exp(log_pmf));
}

MixtureState lossy_fock_state(double eta_i) {
  require_probability(eta_i, "eta_i");
  return {1.0 - eta_i, eta_i};
}

PrecisionValue degraded_precision(double eta, double eta_setup, double eta_s) {
  require_probability(eta, "eta");
  require_probability(eta_setup, "eta_setup");
  require_probability(eta_s, "eta_s");
  if (eta == 0.0) throw std::domain_error("degraded precision singular at eta = 0");
  const double denom = 1.0 - eta * eta_setup;
  if (denom <= 0.0) throw std::domain_error("degraded precision singular at eta*eta_setup = 1");
  return {eta_s / (eta * denom), false};
}

double advantage_ratio(double eta, double eta_setup, double eta_s) {
  require_probability(eta, "eta");
  require_probability(eta_setup, "eta_setup");
  require_probability(eta_s, "eta_s");
  const double denom = 1.0 - eta * eta_setup;
  if (denom <= 0.0) throw std::domain_error("advantage ratio singular at eta*eta_setup = 1");
  return eta_s / denom;
}

bool jakeman_condition(double eta_i_total, double eta_s) {
  require_probability(eta_i_total, "eta_i_total");
  require_probability(eta_s, "eta_s");
  return eta_i_total + eta_s > 1.0;
}

std::vector<CurvePoint> sweep_advantage_curve(const std::vector<double>& eta_grid,
                                              double eta_setup, double eta_s) {
  require_probability(eta_setup, "eta_setup");
  require_probability(eta_s, "eta_s");
  std::vector<CurvePoint> curve;
  curve.reserve(eta_grid.size());
  for (double eta : eta_grid) {
    require_probability(eta, "eta");
    CurvePoint p;
    p.eta = eta;
    p.r_analytic = (eta * eta_setup >= 1.0)
                       ? std::numeric_limits<double>::infinity()
                       : advantage_ratio(eta, eta_setup, eta_s);
    curve.push_back(p);
  }
  return curve;
}

}  // namespace heraldsim::analytic
