#include <benchmark/benchmark.h>

#include <random>

#include "monomt/audio_io.hpp"
#include "monomt/pipeline.hpp"

namespace {

monomt::AudioBuffer melody_buffer(int notes) {
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> pitch(48, 84);
  monomt::ScoreSpec score;
  score.tempo_bpm = 120.0;
  for (int i = 0; i < notes; ++i)
    score.notes.push_back({pitch(rng), static_cast<double>(i), 1.0, 0.9});
  return monomt::synth_melody(score, 44100);
}

void Transcribe(benchmark::State& state) {
  const auto buf = melody_buffer(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto result = monomt::transcribe(buf);
    benchmark::DoNotOptimize(result);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(Transcribe)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
