#pragma once

#include <optional>
#include <vector>

namespace monomt {

/// Mono PCM signal, samples normalized to [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 44100;

  double duration_seconds() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
  bool empty() const { return samples.empty(); }

  bool operator==(const AudioBuffer&) const = default;
};

struct TimeSignature {
  int numerator = 4;
  int denominator = 4;

  bool operator==(const TimeSignature&) const = default;
};

/// One note of a symbolic reference score, in beat units.
struct NoteSpec {
  int midi = 60;
  double onset_beats = 0.0;
  double duration_beats = 1.0;
  double amplitude = 1.0;  // linear gain applied at synthesis; 1.0 = nominal

  bool operator==(const NoteSpec&) const = default;
};

/// Symbolic score used as synthesis input and evaluation reference.
/// Rests are implied by gaps between notes; length_beats (when larger than
/// the last note end) appends trailing rest.
struct ScoreSpec {
  double tempo_bpm = 120.0;
  TimeSignature time_signature{4, 4};
  std::vector<NoteSpec> notes;
  double length_beats = 0.0;

  double total_beats() const {
    double end = length_beats;
    for (const auto& n : notes) {
      const double e = n.onset_beats + n.duration_beats;
      if (e > end) end = e;
    }
    return end;
  }

  bool operator==(const ScoreSpec&) const = default;
};

/// Throws Error(invalid_score) if the score violates its invariants
/// (pitch range, ordering, monophony, positive tempo/durations).
void validate(const ScoreSpec& score);

/// Per-frame analysis result. `time_s` is the frame center; `midi` is empty
/// for unvoiced frames.
struct PitchFrame {
  double time_s = 0.0;
  double freq_hz = 0.0;
  std::optional<int> midi;
  double energy = 0.0;  // frame RMS
  int snap_iterations = 0;

  bool voiced() const { return midi.has_value(); }
};

struct PitchTrack {
  std::vector<PitchFrame> frames;
  int frame_size = 0;
  int hop = 0;
  int sample_rate = 0;
};

struct EnergyPoint {
  double time_s = 0.0;
  double rms = 0.0;
};

/// A segmented note in clock time.
struct NoteEvent {
  int midi = 0;
  double onset_s = 0.0;
  double duration_s = 0.0;
  double peak_energy = 0.0;
};

struct QuantizedNote {
  int midi = 0;
  double onset_beats = 0.0;
  double duration_beats = 0.0;

  bool operator==(const QuantizedNote&) const = default;
};

/// Beat-quantized score: the pipeline's symbolic output.
struct QuantizedScore {
  double tempo_bpm = 120.0;
  TimeSignature time_signature{4, 4};
  std::vector<QuantizedNote> notes;
  int bar_count = 1;

  double total_beats() const {
    double end = 0.0;
    for (const auto& n : notes) {
      const double e = n.onset_beats + n.duration_beats;
      if (e > end) end = e;
    }
    return end;
  }

  bool operator==(const QuantizedScore&) const = default;
};

}  // namespace monomt
