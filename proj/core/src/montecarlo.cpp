#include "heraldsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "heraldsim/estimation.hpp"

namespace heraldsim::mc {

bool GateSchedule::contains(double t) const {
  auto it = std::upper_bound(intervals.begin(), intervals.end(), t,
                             [](double x, const std::pair<double, double>& iv) {
                               return x < iv.second;
                             });
  return it != intervals.end() && it->first <= t;
}

double GateSchedule::open_time_within(double t0, double t1) const {
  double open = 0.0;
  for (const auto& [a, b] : intervals) {
    const double lo = std::max(a, t0);
    const double hi = std::min(b, t1);
    if (hi > lo) open += hi - lo;
  }
  return open;
}

std::vector<double> generate_pair_emissions(double rate, double duration, RngStream& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("emission rate must be > 0");
  if (!(duration > 0.0)) throw std::invalid_argument("duration must be > 0");
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(rate * duration * 1.15) + 16);
  double t = rng.exponential(rate);
  while (t < duration) {
    times.push_back(t);
    t += rng.exponential(rate);
  }
  return times;
}

std::vector<double> thin(const std::vector<double>& events, double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("survival probability out of [0,1]");
  std::vector<double> kept;
  kept.reserve(events.size());
  // one draw per event regardless of p, so downstream draws stay aligned
  // between runs that differ only in an efficiency
  for (double t : events) {
    if (rng.bernoulli(p)) kept.push_back(t);
  }
  return kept;
}

GateSchedule build_gate_schedule(const std::vector<double>& herald_clicks,
                                 double latency, double width) {
  GateSchedule schedule;
  schedule.intervals.reserve(herald_clicks.size());
  for (double t : herald_clicks) {
    const double open = t + latency;
    const double close = open + width;
    if (!schedule.intervals.empty() && open <= schedule.intervals.back().second) {
      schedule.intervals.back().second = std::max(schedule.intervals.back().second, close);
    } else {
      schedule.intervals.emplace_back(open, close);
    }
  }
  return schedule;
}

std::vector<double> apply_switch(const std::vector<double>& arrivals,
                                 const GateSchedule& schedule,
                                 double on_transmission, double leakage,
                                 bool enabled, RngStream& rng) {
  if (!enabled) return thin(arrivals, on_transmission, rng);
  std::vector<double> passed;
  passed.reserve(arrivals.size());
  std::size_t k = 0;
  const auto& iv = schedule.intervals;
  for (double t : arrivals) {
    while (k < iv.size() && iv[k].second <= t) ++k;
    const bool inside = k < iv.size() && iv[k].first <= t;
    if (rng.bernoulli(inside ? on_transmission : leakage)) passed.push_back(t);
  }
  return passed;
}

TimeTagStream detect(const std::vector<double>& arrivals, const DetectorConfig& det,
                     double duration, Channel channel, RngStream& rng) {
  std::vector<double> clicks = thin(arrivals, det.efficiency, rng);

  if (det.dark_rate > 0.0) {
    std::vector<double> darks;
    double t = rng.exponential(det.dark_rate);
    while (t < duration) {
      darks.push_back(t);
      t += rng.exponential(det.dark_rate);
    }
    std::vector<double> merged;
    merged.reserve(clicks.size() + darks.size());
    std::merge(clicks.begin(), clicks.end(), darks.begin(), darks.end(),
               std::back_inserter(merged));
    clicks = std::move(merged);
  }

  if (det.dead_time_s > 0.0 && !clicks.empty()) {
    std::vector<double> alive;
    alive.reserve(clicks.size());
    double last = -std::numeric_limits<double>::infinity();
    for (double t : clicks) {
      if (t - last >= det.dead_time_s) {
        alive.push_back(t);
        last = t;
      }
    }
    clicks = std::move(alive);
  }

  TimeTagStream stream;
  stream.channel = channel;
  stream.timestamps = std::move(clicks);
  return stream;
}

namespace {

std::uint64_t count_overlap(const std::vector<std::pair<std::size_t, std::size_t>>& ma,
                            const std::vector<std::pair<std::size_t, std::size_t>>& mb) {
  std::uint64_t n = 0;
  std::size_t i = 0, j = 0;
  while (i < ma.size() && j < mb.size()) {
    if (ma[i].first < mb[j].first) {
      ++i;
    } else if (ma[i].first > mb[j].first) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

TrialResult simulate_trial(const ExperimentConfig& cfg, std::uint64_t trial_index,
                           bool keep_tags) {
  const ValidationReport report = validate(cfg);
  if (!report.ok()) {
    std::string msg = "invalid config:";
    for (const auto& violation : report.violations) msg += " " + violation + ";";
    throw ConfigError(msg);
  }
  if (!cfg.master_seed) throw ConfigError("master_seed is not set");

  RngStream rng(*cfg.master_seed, trial_index);
  const double duration = cfg.source.duration;

  // per-trial drift of the idler coupling, log-normal with mean 1
  double setup_eff = cfg.idler_channel.setup_efficiency;
  if (cfg.jitter_std > 0.0) {
    const double sigma2 = std::log1p(cfg.jitter_std * cfg.jitter_std);
    const double factor = std::exp(-0.5 * sigma2 + std::sqrt(sigma2) * rng.normal());
    setup_eff = std::clamp(setup_eff * factor, 0.0, 1.0);
  }

  const std::vector<double> emissions =
      generate_pair_emissions(cfg.source.pair_rate, duration, rng);

  // herald arm
  const std::vector<double> herald_arm =
      thin(emissions, cfg.source.signal_channel_efficiency, rng);
  TimeTagStream herald =
      detect(herald_arm, cfg.herald_detector, duration, Channel::herald, rng);

  // idler arm: delay, setup loss, gate, sample
  std::vector<double> idler_arrivals;
  idler_arrivals.reserve(emissions.size());
  for (double t : emissions) {
    const double shifted = t + cfg.idler_channel.delay_s;
    if (shifted < duration) idler_arrivals.push_back(shifted);
  }
  idler_arrivals = thin(idler_arrivals, setup_eff, rng);

  const GateSchedule schedule =
      build_gate_schedule(herald.timestamps, cfg.optical_switch.electronic_latency_s,
                          cfg.optical_switch.gate_width_s);
  idler_arrivals = apply_switch(idler_arrivals, schedule,
                                cfg.optical_switch.on_state_transmission,
                                cfg.optical_switch.off_state_leakage,
                                cfg.optical_switch.enabled, rng);
  idler_arrivals = thin(idler_arrivals, cfg.sample.transmission, rng);

  TimeTagStream idler_a;
  TimeTagStream idler_b;
  if (cfg.hbt_mode) {
    std::vector<double> to_a;
    std::vector<double> to_b;
    to_a.reserve(idler_arrivals.size());
    to_b.reserve(idler_arrivals.size());
    for (double t : idler_arrivals) {
      (rng.bernoulli(0.5) ? to_a : to_b).push_back(t);
    }
    idler_a = detect(to_a, cfg.idler_detector, duration, Channel::idler, rng);
    idler_b = detect(to_b, cfg.idler_detector, duration, Channel::idler_b, rng);
  } else {
    idler_a = detect(idler_arrivals, cfg.idler_detector, duration, Channel::idler, rng);
  }

  const auto match_a =
      est::match_coincidences(herald.timestamps, idler_a.timestamps, cfg.coincidence);

  TrialResult result;
  TrialCounts& counts = result.counts;
  counts.n_herald = herald.timestamps.size();
  counts.n_idler = idler_a.timestamps.size();
  counts.n_coinc_herald_a = match_a.size();
  counts.n_coincidence = match_a.size();
  counts.dark_estimate = cfg.idler_detector.dark_rate * duration;
  if (cfg.hbt_mode) {
    const auto match_b =
        est::match_coincidences(herald.timestamps, idler_b.timestamps, cfg.coincidence);
    counts.n_idler_b = idler_b.timestamps.size();
    counts.n_coinc_herald_b = match_b.size();
    counts.n_triple = count_overlap(match_a, match_b);
  }

  if (keep_tags) {
    result.streams.push_back(std::move(herald));
    result.streams.push_back(std::move(idler_a));
    if (cfg.hbt_mode) result.streams.push_back(std::move(idler_b));
  }
  return result;
}

std::vector<TrialCounts> run_experiment(const ExperimentConfig& cfg) {
  return run_experiment(cfg, 1);
}

std::vector<TrialCounts> run_experiment(const ExperimentConfig& cfg, unsigned n_threads) {
  const std::uint64_t n = cfg.repetitions;
  std::vector<TrialCounts> out(n);
  if (n_threads <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) out[i] = simulate_trial(cfg, i).counts;
    return out;
  }

  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(n_threads, std::max<std::uint64_t>(n, 1)));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::uint64_t i = w; i < n; i += workers) {
          out[i] = simulate_trial(cfg, i).counts;
        }
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

}  // namespace heraldsim::mc
