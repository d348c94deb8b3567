#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "heraldsim/config_io.hpp"
#include "heraldsim/montecarlo.hpp"

using namespace heraldsim;
using namespace heraldsim::mc;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

bool counts_equal(const TrialCounts& a, const TrialCounts& b) {
  return a.n_herald == b.n_herald && a.n_idler == b.n_idler &&
         a.n_idler_b == b.n_idler_b && a.n_coincidence == b.n_coincidence &&
         a.n_coinc_herald_a == b.n_coinc_herald_a &&
         a.n_coinc_herald_b == b.n_coinc_herald_b && a.n_triple == b.n_triple &&
         a.dark_estimate == b.dark_estimate;
}

}  // namespace

TEST_CASE("pair emission rejects bad parameters") {
  RngStream rng(1, 0);
  CHECK_THROWS_AS(generate_pair_emissions(0.0, 1.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(generate_pair_emissions(10.0, 0.0, rng), std::invalid_argument);
}

TEST_CASE("pair emission times are sorted and inside the trial") {
  RngStream rng(2, 0);
  const auto times = generate_pair_emissions(1.0e4, 0.2, rng);
  CHECK(std::is_sorted(times.begin(), times.end()));
  REQUIRE_FALSE(times.empty());
  CHECK(times.front() >= 0.0);
  CHECK(times.back() < 0.2);
  for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] > times[i - 1]);
}

TEST_CASE("pair emission counts follow Poisson moments") {
  // rate * duration = 2000, so mean 2000 and std sqrt(2000) ~ 44.7
  const int n_streams = 400;
  std::vector<double> counts;
  counts.reserve(n_streams);
  for (int s = 0; s < n_streams; ++s) {
    RngStream rng(1234, static_cast<std::uint64_t>(s));
    counts.push_back(static_cast<double>(generate_pair_emissions(1.0e4, 0.2, rng).size()));
  }
  const double expected_std = std::sqrt(2000.0);
  CHECK(std::abs(mean_of(counts) - 2000.0) < 3.0 * expected_std / std::sqrt(double(n_streams)));
  // sampling std of the std itself is roughly std/sqrt(2n)
  CHECK(std::abs(stddev_of(counts) - expected_std) <
        3.0 * expected_std / std::sqrt(2.0 * n_streams));
}

TEST_CASE("pair emission is deterministic per (seed, stream)") {
  RngStream a(42, 0);
  RngStream b(42, 0);
  CHECK(generate_pair_emissions(5.0e3, 0.1, a) == generate_pair_emissions(5.0e3, 0.1, b));
}

TEST_CASE("thinning endpoints") {
  RngStream rng(3, 0);
  const std::vector<double> events{0.1, 0.2, 0.3, 0.4};
  CHECK(thin(events, 1.0, rng) == events);
  CHECK(thin(events, 0.0, rng).empty());
  CHECK_THROWS_AS(thin(events, 1.5, rng), std::invalid_argument);
}

TEST_CASE("thinning keeps the expected fraction") {
  RngStream rng(4, 0);
  std::vector<double> events(100000);
  std::iota(events.begin(), events.end(), 0.0);
  const double p = 0.38;
  const double kept = static_cast<double>(thin(events, p, rng).size());
  const double sigma = std::sqrt(p * (1.0 - p) * events.size());
  CHECK(std::abs(kept - p * events.size()) < 3.0 * sigma);
}

TEST_CASE("gate schedule construction and merging") {
  const double latency = 0.6e-6;
  const double width = 1.0e-6;

  const auto single = build_gate_schedule({0.0}, latency, width);
  REQUIRE(single.intervals.size() == 1);
  CHECK(single.intervals[0].first == 0.0 + latency);
  CHECK(single.intervals[0].second == (0.0 + latency) + width);

  // overlapping gates fuse into one
  const auto merged = build_gate_schedule({0.0, 0.2e-6}, latency, width);
  REQUIRE(merged.intervals.size() == 1);
  CHECK(merged.intervals[0].first == 0.0 + latency);
  CHECK(merged.intervals[0].second == (0.2e-6 + latency) + width);

  const auto separate = build_gate_schedule({0.0, 5.0e-6}, latency, width);
  CHECK(separate.intervals.size() == 2);

  CHECK(build_gate_schedule({}, latency, width).intervals.empty());
}

TEST_CASE("gate membership is half-open") {
  const auto schedule = build_gate_schedule({0.0}, 1.0, 2.0);
  CHECK(schedule.contains(1.0));
  CHECK(schedule.contains(2.999));
  CHECK_FALSE(schedule.contains(3.0));
  CHECK_FALSE(schedule.contains(0.999));
  CHECK(schedule.open_time_within(0.0, 10.0) == doctest::Approx(2.0));
  CHECK(schedule.open_time_within(2.0, 10.0) == doctest::Approx(1.0));
}

TEST_CASE("switch keeps gated photons and blocks the rest") {
  RngStream rng(5, 0);
  const auto schedule = build_gate_schedule({0.0}, 0.6e-6, 1.0e-6);
  const std::vector<double> inside{1.0e-6};
  const std::vector<double> outside{5.0e-6};
  CHECK(apply_switch(inside, schedule, 1.0, 0.0, true, rng) == inside);
  CHECK(apply_switch(outside, schedule, 1.0, 0.0, true, rng).empty());
  // disabled switch sits open
  CHECK(apply_switch(outside, schedule, 1.0, 0.0, false, rng) == outside);
}

TEST_CASE("switch passes the gate duty cycle of a Poisson stream") {
  RngStream rng(6, 0);
  const double duration = 0.2;
  const auto heralds = generate_pair_emissions(5.0e3, duration, rng);
  const auto schedule = build_gate_schedule(heralds, 0.0, 1.0e-6);
  const auto arrivals = generate_pair_emissions(2.0e5, duration, rng);

  const auto passed = apply_switch(arrivals, schedule, 1.0, 0.0, true, rng);
  const double duty = schedule.open_time_within(0.0, duration) / duration;
  const double expected = duty * static_cast<double>(arrivals.size());
  const double sigma = std::sqrt(duty * (1.0 - duty) * arrivals.size());
  CHECK(std::abs(static_cast<double>(passed.size()) - expected) < 3.0 * sigma);
}

TEST_CASE("no stage creates events beyond its input plus darks") {
  RngStream rng(71, 0);
  const auto events = generate_pair_emissions(5.0e4, 0.1, rng);
  CHECK(thin(events, 0.7, rng).size() <= events.size());

  const auto schedule = build_gate_schedule({1e-3, 2e-3, 3e-3}, 0.0, 1e-4);
  CHECK(apply_switch(events, schedule, 0.9, 0.1, true, rng).size() <= events.size());

  DetectorConfig quiet;  // no darks
  CHECK(detect(events, quiet, 0.1, Channel::idler, rng).timestamps.size() <=
        events.size());

  DetectorConfig noisy;
  noisy.dark_rate = 2.0e3;
  const auto clicked = detect(events, noisy, 0.1, Channel::idler, rng);
  // binomial + Poisson upper tail, generous bound
  CHECK(clicked.timestamps.size() <= events.size() + 2 * 200 + 100);
}

TEST_CASE("detector identity case") {
  RngStream rng(7, 0);
  const std::vector<double> arrivals{0.01, 0.02, 0.03};
  DetectorConfig det;  // efficiency 1, no darks, no dead time
  const auto stream = detect(arrivals, det, 0.2, Channel::idler, rng);
  CHECK(stream.timestamps == arrivals);
  CHECK(stream.channel == Channel::idler);
}

TEST_CASE("dark counts arrive at the configured rate") {
  DetectorConfig det;
  det.dark_rate = 1.0e3;
  std::vector<double> counts;
  for (int s = 0; s < 300; ++s) {
    RngStream rng(321, static_cast<std::uint64_t>(s));
    counts.push_back(static_cast<double>(detect({}, det, 0.2, Channel::idler, rng)
                                             .timestamps.size()));
  }
  // mean 200 darks per trial
  CHECK(std::abs(mean_of(counts) - 200.0) < 3.0 * std::sqrt(200.0 / counts.size()));
}

TEST_CASE("dead time removes trailing clicks") {
  RngStream rng(8, 0);
  DetectorConfig det;
  det.dead_time_s = 50.0e-9;
  const auto clicks = detect({100.0e-9, 110.0e-9}, det, 1.0, Channel::idler, rng);
  CHECK(clicks.timestamps == std::vector<double>{100.0e-9});

  // exactly one dead time apart is accepted again
  const auto spaced = detect({100.0e-9, 150.0e-9}, det, 1.0, Channel::idler, rng);
  CHECK(spaced.timestamps.size() == 2);
}

TEST_CASE("simulate_trial requires a seed and a valid config") {
  ExperimentConfig cfg = desk_profile();
  CHECK_THROWS_AS(simulate_trial(cfg, 0), ConfigError);
  cfg.master_seed = 1;
  cfg.sample.transmission = 1.5;
  CHECK_THROWS_AS(simulate_trial(cfg, 0), ConfigError);
}

TEST_CASE("trials are deterministic and batch-independent") {
  ExperimentConfig cfg = desk_profile();
  cfg.master_seed = 99;
  cfg.repetitions = 5;

  const TrialCounts once = simulate_trial(cfg, 3).counts;
  const TrialCounts again = simulate_trial(cfg, 3).counts;
  CHECK(counts_equal(once, again));

  const auto batch = mc::run_experiment(cfg);
  REQUIRE(batch.size() == 5);
  for (std::uint64_t i = 0; i < 5; ++i) {
    CHECK(counts_equal(batch[i], simulate_trial(cfg, i).counts));
  }

  const auto parallel = mc::run_experiment(cfg, 4);
  REQUIRE(parallel.size() == batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) CHECK(counts_equal(batch[i], parallel[i]));
}

TEST_CASE("count invariants hold across randomized configs") {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int i = 0; i < 40; ++i) {
    ExperimentConfig cfg = desk_profile();
    cfg.master_seed = 1000 + i;
    cfg.repetitions = 2;
    cfg.source.pair_rate = 2.0e3 + 2.0e4 * unit(gen);
    cfg.source.signal_channel_efficiency = unit(gen);
    cfg.idler_channel.setup_efficiency = unit(gen);
    cfg.sample.transmission = unit(gen);
    cfg.optical_switch.off_state_leakage = 0.2 * unit(gen);
    cfg.idler_detector.dark_rate = 500.0 * unit(gen);
    cfg.hbt_mode = (i % 2 == 0);

    const auto result = simulate_trial(cfg, 0, true);
    const TrialCounts& c = result.counts;
    CHECK(c.n_coincidence <= std::min(c.n_herald, c.n_idler));
    CHECK(c.n_triple <= std::min(c.n_coinc_herald_a, c.n_coinc_herald_b));
    CHECK(c.n_coinc_herald_a == c.n_coincidence);

    for (const auto& stream : result.streams) {
      CHECK(std::is_sorted(stream.timestamps.begin(), stream.timestamps.end()));
      for (std::size_t k = 1; k < stream.timestamps.size(); ++k)
        CHECK(stream.timestamps[k] > stream.timestamps[k - 1]);
      if (!stream.timestamps.empty()) {
        CHECK(stream.timestamps.front() >= 0.0);
        CHECK(stream.timestamps.back() <= cfg.source.duration);
      }
    }
  }
}

TEST_CASE("with a perfect gate every idler click is inside a gate interval") {
  ExperimentConfig cfg = desk_profile();  // leakage 0, on-transmission 1, no darks
  cfg.master_seed = 7;
  const auto result = simulate_trial(cfg, 0, true);
  REQUIRE(result.streams.size() == 2);
  const auto& herald = result.streams[0];
  const auto& idler = result.streams[1];
  const auto schedule =
      build_gate_schedule(herald.timestamps, cfg.optical_switch.electronic_latency_s,
                          cfg.optical_switch.gate_width_s);
  REQUIRE_FALSE(idler.timestamps.empty());
  for (double t : idler.timestamps) CHECK(schedule.contains(t));
}

TEST_CASE("a full desk-scale batch yields nonzero counts in every trial") {
  ExperimentConfig cfg = desk_profile();
  cfg.master_seed = 4242;
  const auto trials = mc::run_experiment(cfg, 4);
  REQUIRE(trials.size() == 3000);
  for (const auto& t : trials) {
    CHECK(t.n_herald > 0);
    CHECK(t.n_idler > 0);
    CHECK(t.n_coincidence > 0);
  }
}

TEST_CASE("herald singles follow the thinned emission rate") {
  ExperimentConfig cfg = desk_profile();
  cfg.master_seed = 11;
  cfg.repetitions = 200;
  const auto trials = mc::run_experiment(cfg, 4);
  std::vector<double> n_s;
  n_s.reserve(trials.size());
  for (const auto& t : trials) n_s.push_back(static_cast<double>(t.n_herald));
  const double expected =
      cfg.source.pair_rate * cfg.source.duration * cfg.source.signal_channel_efficiency;
  const double sem = stddev_of(n_s) / std::sqrt(double(n_s.size()));
  CHECK(std::abs(mean_of(n_s) - expected) < 3.0 * sem);
}

TEST_CASE("Klyshko chain recovers setup efficiency times transmission") {
  ExperimentConfig cfg = paper_profile();
  cfg.master_seed = 13;
  cfg.repetitions = 100;
  cfg.sample.transmission = 1.0;
  const auto trials = mc::run_experiment(cfg, 4);

  std::vector<double> ratios;
  double sum_c = 0.0, sum_s = 0.0;
  for (const auto& t : trials) {
    ratios.push_back(static_cast<double>(t.n_coincidence) / static_cast<double>(t.n_herald));
    sum_c += static_cast<double>(t.n_coincidence);
    sum_s += static_cast<double>(t.n_herald);
  }
  const double sem = stddev_of(ratios) / std::sqrt(double(ratios.size()));
  // generous gate timing: capture probability 1, so the chain is just
  // setup_efficiency * transmission
  CHECK(std::abs(sum_c / sum_s - cfg.idler_channel.setup_efficiency) < 3.0 * sem);
}

TEST_CASE("coincidences given heralds disperse like a binomial") {
  ExperimentConfig cfg = desk_profile();
  cfg.master_seed = 17;
  cfg.repetitions = 1000;
  cfg.sample.transmission = 0.37 / 0.38;
  const auto trials = mc::run_experiment(cfg, 4);

  double sum_c = 0.0, sum_s = 0.0;
  for (const auto& t : trials) {
    sum_c += static_cast<double>(t.n_coincidence);
    sum_s += static_cast<double>(t.n_herald);
  }
  const double eta_i = sum_c / sum_s;

  // chi-square GOF of the standardized conditional residuals at the 1% level
  double chi2 = 0.0;
  for (const auto& t : trials) {
    const double n_s = static_cast<double>(t.n_herald);
    const double expected = eta_i * n_s;
    const double var = n_s * eta_i * (1.0 - eta_i);
    const double z = (static_cast<double>(t.n_coincidence) - expected) / std::sqrt(var);
    chi2 += z * z;
  }
  const double dof = static_cast<double>(trials.size() - 1);
  const double band = 2.576 * std::sqrt(2.0 * dof);
  CHECK(chi2 > dof - band);
  CHECK(chi2 < dof + band);
}

TEST_CASE("zero transmission leaves only accidental coincidences") {
  ExperimentConfig cfg = desk_profile();
  cfg.master_seed = 19;
  cfg.repetitions = 300;
  cfg.sample.transmission = 0.0;
  cfg.idler_detector.dark_rate = 2.0e3;  // idler clicks are darks only
  const auto trials = mc::run_experiment(cfg, 4);

  double total_c = 0.0;
  double herald_rate = 0.0, idler_rate = 0.0;
  for (const auto& t : trials) {
    total_c += static_cast<double>(t.n_coincidence);
    herald_rate += static_cast<double>(t.n_herald);
    idler_rate += static_cast<double>(t.n_idler);
  }
  herald_rate /= trials.size() * cfg.source.duration;
  idler_rate /= trials.size() * cfg.source.duration;

  const double expected_per_trial =
      herald_rate * idler_rate * cfg.coincidence.window_s * cfg.source.duration;
  const double expected_total = expected_per_trial * trials.size();
  CHECK(std::abs(total_c - expected_total) < 3.0 * std::sqrt(expected_total) + 1.0);
}
