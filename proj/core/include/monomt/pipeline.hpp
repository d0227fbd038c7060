#pragma once

#include <string>
#include <vector>

#include "monomt/preprocess.hpp"
#include "monomt/segmentation.hpp"
#include "monomt/types.hpp"

namespace monomt {

struct PipelineConfig {
  int frame_size = 4096;
  int hop = 1024;
  PreprocessConfig preprocess;
  bool gate_enabled = true;
  SegmentationConfig segmentation;
  double tempo_fold_min = 60.0;
  double tempo_fold_max = 180.0;
  std::vector<int> ts_candidates{3, 4};
  int grid = 16;
  int ppq = 480;
  int program = 0;
};

/// PipelineConfig JSON (the MONOMT_CONFIG file format). Unknown keys are
/// rejected; missing keys keep their defaults.
PipelineConfig pipeline_config_from_json(const std::string& json_text);
std::string pipeline_config_to_json(const PipelineConfig& cfg);
PipelineConfig load_pipeline_config(const std::string& path);

struct Diagnostics {
  double trimmed_duration_s = 0.0;
  std::vector<EnergyPoint> energy;
  std::vector<NoteEvent> notes;
  std::vector<double> onsets;
  double beat_period_s = 0.0;
  bool tempo_fallback = false;  // too few onsets; default tempo used
  bool ts_fallback = false;     // too little material; default meter used
};

struct TranscriptionResult {
  QuantizedScore score;
  PitchTrack track;
  Diagnostics diagnostics;
};

/// Full transcription: trim -> gate -> normalize -> pitch/energy tracks ->
/// segmentation -> onsets -> tempo -> time signature -> quantization.
/// Module errors propagate as StageError with the failing stage named;
/// degenerate rhythm input (a single onset, or under two bars) falls back
/// to 120 BPM / 4/4 and is flagged in diagnostics.
TranscriptionResult transcribe(const AudioBuffer& buf,
                               const PipelineConfig& cfg = {});

}  // namespace monomt
