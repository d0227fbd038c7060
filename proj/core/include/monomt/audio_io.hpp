#pragma once

#include <string>

#include "monomt/types.hpp"

namespace monomt {

/// Reads a RIFF/WAVE file containing 16-bit integer PCM, mono or stereo.
/// Stereo is downmixed by channel average; samples are scaled by 1/32768.
/// Throws: MalformedRiff, UnsupportedEncoding, EmptyAudio, IoFailure.
AudioBuffer read_wav(const std::string& path);

/// Writes `buf` as mono 16-bit PCM little-endian RIFF/WAVE.
/// Round trip reproduces every sample within 1/32768.
void write_wav(const AudioBuffer& buf, const std::string& path);

enum class Timbre {
  pure_sine,
  harmonic,  // fundamental plus `harmonics` partials with geometric decay
};

struct SynthConfig {
  Timbre timbre = Timbre::pure_sine;
  int harmonics = 3;    // extra partials above the fundamental
  double decay = 0.5;   // amplitude ratio between successive partials
};

/// Renders a score to audio. Notes get 10 ms linear attack/release ramps
/// (the release extends past the note end); rests are silence. Peak sample
/// amplitude of a nominal note is 0.8.
AudioBuffer synth_melody(const ScoreSpec& score, int sample_rate,
                         const SynthConfig& cfg = {});

/// ScoreSpec JSON: {"tempo_bpm":f, "time_signature":[n,d],
/// "notes":[{"midi":i,"onset":f,"duration":f}]}. Optional per-note "amp"
/// and top-level "length_beats" are accepted and emitted only when set.
ScoreSpec score_from_json(const std::string& json_text);
std::string score_to_json(const ScoreSpec& score);

ScoreSpec load_score(const std::string& path);
void save_score(const ScoreSpec& score, const std::string& path);

}  // namespace monomt
