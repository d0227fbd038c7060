#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "monomt/spectral.hpp"

namespace {

std::vector<std::complex<double>> random_frame(std::size_t n) {
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<std::complex<double>> v(n);
  for (auto& x : v) x = {amp(rng), amp(rng)};
  return v;
}

void FftForward(benchmark::State& state) {
  auto frame = random_frame(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto copy = frame;
    monomt::fft_inplace(copy, monomt::FftDirection::forward);
    benchmark::DoNotOptimize(copy);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(FftForward)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void DominantFrequency4096(benchmark::State& state) {
  std::vector<double> samples(4096);
  for (std::size_t i = 0; i < samples.size(); ++i)
    samples[i] = 0.5 * std::sin(2.0 * 3.14159265358979 * 440.0 * i / 44100.0);
  const monomt::Frame frame{samples, 0.0, 44100};
  for (auto _ : state) {
    auto peak = monomt::dominant_frequency(frame);
    benchmark::DoNotOptimize(peak);
  }
}
BENCHMARK(DominantFrequency4096);

}  // namespace
