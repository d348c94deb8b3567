// Microbenchmarks for the hot paths: the time-tag correlator, Poisson event
// generation, and a full desk-scale trial.

#include <benchmark/benchmark.h>

#include <vector>

#include "heraldsim/config_io.hpp"
#include "heraldsim/estimation.hpp"
#include "heraldsim/montecarlo.hpp"
#include "heraldsim/rng.hpp"

namespace {

std::vector<double> poisson_stream(double rate, double duration, std::uint64_t stream) {
  heraldsim::RngStream rng(101, stream);
  return heraldsim::mc::generate_pair_emissions(rate, duration, rng);
}

void BM_CountCoincidences(benchmark::State& state) {
  const double rate = static_cast<double>(state.range(0));
  const auto a = poisson_stream(rate, 1.0, 0);
  auto b = poisson_stream(rate, 1.0, 1);
  for (auto& t : b) t += 1.1e-6;
  heraldsim::CoincidenceConfig cc;
  cc.window_s = 30e-9;
  cc.nominal_offset_s = 1.1e-6;

  for (auto _ : state) {
    benchmark::DoNotOptimize(heraldsim::est::match_coincidences(a, b, cc));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(a.size() + b.size()));
}
BENCHMARK(BM_CountCoincidences)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_PairEmissions(benchmark::State& state) {
  const double rate = static_cast<double>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state) {
    heraldsim::RngStream rng(202, stream++);
    benchmark::DoNotOptimize(heraldsim::mc::generate_pair_emissions(rate, 0.2, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rate * 0.2));
}
BENCHMARK(BM_PairEmissions)->Arg(9000)->Arg(90000)->Arg(900000);

void BM_SimulateTrialDesk(benchmark::State& state) {
  heraldsim::ExperimentConfig cfg = heraldsim::desk_profile();
  cfg.master_seed = 303;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(heraldsim::mc::simulate_trial(cfg, trial++));
  }
}
BENCHMARK(BM_SimulateTrialDesk);

void BM_SimulateTrialPaper(benchmark::State& state) {
  heraldsim::ExperimentConfig cfg = heraldsim::paper_profile();
  cfg.master_seed = 304;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(heraldsim::mc::simulate_trial(cfg, trial++));
  }
}
BENCHMARK(BM_SimulateTrialPaper);

}  // namespace

BENCHMARK_MAIN();
