#include "heraldsim/rng.hpp"

#include <cmath>

namespace heraldsim {

namespace {
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;  // 2^-53
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // seed_seq's generate() is fully specified by the standard, so this mapping
  // is stable across platforms and library versions.
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed & 0xffffffffu),
      static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream_id & 0xffffffffu),
      static_cast<std::uint32_t>(stream_id >> 32),
  };
  engine_ = std::mt19937_64(seq);
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * kTwoPow53Inv;
}

double RngStream::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * kTwoPow53Inv;
}

double RngStream::exponential(double rate) {
  return -std::log(uniform_open()) / rate;
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform_open()));
  const double phi = 6.283185307179586476925286766559 * uniform();
  cached_normal_ = r * std::sin(phi);
  has_cached_normal_ = true;
  return r * std::cos(phi);
}

}  // namespace heraldsim
