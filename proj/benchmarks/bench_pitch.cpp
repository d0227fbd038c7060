#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "monomt/pitch.hpp"

namespace {

void SnapFrequency(benchmark::State& state) {
  const monomt::PitchTable table;
  std::mt19937 rng(321);
  std::uniform_real_distribution<double> log_f(std::log(8.0), std::log(12544.0));
  std::vector<double> freqs(1024);
  for (auto& f : freqs) f = std::exp(log_f(rng));

  std::size_t i = 0;
  for (auto _ : state) {
    auto snap = monomt::snap_frequency(freqs[i++ & 1023], table);
    benchmark::DoNotOptimize(snap);
  }
}
BENCHMARK(SnapFrequency);

void DichotomyMinimize(benchmark::State& state) {
  for (auto _ : state) {
    auto res = monomt::dichotomy_minimize(
        [](double x) { return (x - 3.3) * (x - 3.3); }, {0.0, 10.0, 1e-8, 64});
    benchmark::DoNotOptimize(res);
  }
}
BENCHMARK(DichotomyMinimize);

}  // namespace
