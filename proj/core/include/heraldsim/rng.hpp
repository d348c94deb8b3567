#pragma once

#include <cstdint>
#include <random>

namespace heraldsim {

/// Deterministic random source for one (seed, stream) pair. Identical
/// (seed, stream_id) always reproduces the identical sample sequence, so a
/// trial simulated alone is bit-identical to the same trial inside a batch.
///
/// All variates are derived from raw mt19937_64 output through explicit
/// transforms instead of std:: distributions, whose algorithms are
/// implementation-defined and would break reproducibility across standard
/// libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in (0, 1); never returns an endpoint.
  double uniform_open();
  /// Exponential inter-arrival time with the given rate (> 0); always > 0.
  double exponential(double rate);
  bool bernoulli(double p);
  /// Standard normal via Box-Muller (second value cached).
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace heraldsim
