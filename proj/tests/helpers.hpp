#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "monomt/types.hpp"

namespace monomt::test {

inline AudioBuffer make_sine(double freq_hz, double seconds, int sample_rate,
                             double amplitude = 0.5) {
  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(std::lround(seconds * sample_rate));
  buf.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    buf.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                          static_cast<double>(i) / sample_rate);
  return buf;
}

inline AudioBuffer make_silence(double seconds, int sample_rate) {
  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.assign(static_cast<std::size_t>(std::lround(seconds * sample_rate)),
                     0.0);
  return buf;
}

inline AudioBuffer concat(const AudioBuffer& a, const AudioBuffer& b) {
  AudioBuffer out = a;
  out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
  return out;
}

/// Direct Fourier magnitude at one frequency: |sum x[n] e^{-2pi i f n/sr}|.
/// Deliberately independent of the library transform.
inline double dft_magnitude_at(std::span<const double> samples, int sample_rate,
                               double freq_hz) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const double angle = -2.0 * std::numbers::pi * freq_hz *
                         static_cast<double>(n) / sample_rate;
    re += samples[n] * std::cos(angle);
    im += samples[n] * std::sin(angle);
  }
  return std::hypot(re, im);
}

/// Brute-force peak scan over [fmin, fmax] with the given step.
inline double dft_peak_hz(std::span<const double> samples, int sample_rate,
                          double fmin, double fmax, double step = 0.25) {
  double best_f = fmin;
  double best_m = -1.0;
  for (double f = fmin; f <= fmax; f += step) {
    const double m = dft_magnitude_at(samples, sample_rate, f);
    if (m > best_m) {
      best_m = m;
      best_f = f;
    }
  }
  return best_f;
}

/// 128-entry linear scan in log distance, ties to the lower pitch: the
/// independent oracle for snap_frequency.
inline int linear_scan_snap(double freq_hz) {
  int best = 0;
  double best_d = 1e300;
  for (int m = 0; m < 128; ++m) {
    const double f = 440.0 * std::exp2((m - 69) / 12.0);
    const double d = std::fabs(std::log(freq_hz) - std::log(f));
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

inline ScoreSpec make_score(double tempo_bpm, TimeSignature ts,
                            std::vector<NoteSpec> notes) {
  ScoreSpec score;
  score.tempo_bpm = tempo_bpm;
  score.time_signature = ts;
  score.notes = std::move(notes);
  return score;
}

/// Contiguous random melody: quarter/half durations, pitches within
/// [lo_midi, hi_midi]. Immediate pitch repeats are excluded; a re-attack
/// of a steady-amplitude sine carries no acoustic cue at all, so a
/// repeated note is indistinguishable from a single held one.
inline ScoreSpec random_melody(std::mt19937& rng, int note_count,
                               double tempo_bpm, TimeSignature ts,
                               int lo_midi = 48, int hi_midi = 84) {
  std::uniform_int_distribution<int> pitch(lo_midi, hi_midi);
  std::uniform_real_distribution<double> amp(0.8, 1.0);
  std::bernoulli_distribution half_note(0.3);

  ScoreSpec score;
  score.tempo_bpm = tempo_bpm;
  score.time_signature = ts;
  double onset = 0.0;
  int prev = -1;
  for (int i = 0; i < note_count; ++i) {
    NoteSpec n;
    do {
      n.midi = pitch(rng);
    } while (n.midi == prev);
    prev = n.midi;
    n.onset_beats = onset;
    n.duration_beats = half_note(rng) ? 2.0 : 1.0;
    n.amplitude = amp(rng);
    onset += n.duration_beats;
    score.notes.push_back(n);
  }
  return score;
}

inline void add_noise(AudioBuffer& buf, double snr_db, std::mt19937& rng) {
  double acc = 0.0;
  for (double s : buf.samples) acc += s * s;
  const double signal_rms = std::sqrt(acc / static_cast<double>(buf.samples.size()));
  const double noise_rms = signal_rms / std::pow(10.0, snr_db / 20.0);
  std::normal_distribution<double> noise(0.0, noise_rms);
  for (auto& s : buf.samples) {
    s += noise(rng);
    s = std::clamp(s, -1.0, 1.0);
  }
}

inline std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "monomt_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace monomt::test
