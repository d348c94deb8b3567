#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace heraldsim {

/// Raised for malformed or invalid experiment configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an estimator cannot be formed from the data it was given
/// (empty trials, zero variance, singular formula inputs).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Channel { herald, idler, idler_b };

const char* channel_name(Channel c);

/// Sorted detection timestamps of one channel, seconds from trial start.
struct TimeTagStream {
  Channel channel = Channel::herald;
  std::vector<double> timestamps;
};

/// Per-trial tallies extracted from the detection records.
///
/// In HBT mode `n_idler` counts detector A, `n_idler_b` detector B, and the
/// herald/A/B coincidence fields feed the triple-coincidence g2 estimate.
/// Outside HBT mode only n_herald, n_idler, n_coincidence (== n_coinc_herald_a)
/// and dark_estimate are populated.
struct TrialCounts {
  std::uint64_t n_herald = 0;        ///< herald singles, N_S
  std::uint64_t n_idler = 0;         ///< idler singles, N_I (detector A)
  std::uint64_t n_idler_b = 0;       ///< detector B singles (HBT mode)
  std::uint64_t n_coincidence = 0;   ///< herald-idler(A) coincidences, N_C
  std::uint64_t n_coinc_herald_a = 0;
  std::uint64_t n_coinc_herald_b = 0;
  std::uint64_t n_triple = 0;        ///< heralds coincident on both A and B
  double dark_estimate = 0.0;        ///< expected dark clicks inside n_idler
};

}  // namespace heraldsim
