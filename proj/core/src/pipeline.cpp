#include "monomt/pipeline.hpp"

#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "monomt/error.hpp"
#include "monomt/pitch.hpp"
#include "monomt/rhythm.hpp"

namespace monomt {

namespace {

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return std::forward<Fn>(fn)();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e);
  }
}

}  // namespace

TranscriptionResult transcribe(const AudioBuffer& buf,
                               const PipelineConfig& cfg) {
  TranscriptionResult result;
  Diagnostics& diag = result.diagnostics;

  AudioBuffer work = run_stage("trim", [&] {
    return trim_silence(buf, cfg.preprocess);
  });
  if (cfg.gate_enabled)
    work = run_stage("gate", [&] { return noise_gate(work, cfg.preprocess); });
  work = run_stage("normalize", [&] { return normalize(work); });
  diag.trimmed_duration_s = work.duration_seconds();

  result.track = run_stage("analysis", [&] {
    return build_pitch_track(work, cfg.frame_size, cfg.hop);
  });
  diag.energy = run_stage("analysis", [&] {
    return energy_track(work, cfg.frame_size, cfg.hop);
  });

  diag.notes = run_stage("segmentation", [&] {
    return segment_notes(result.track, cfg.segmentation);
  });

  diag.onsets = run_stage("onsets", [&] {
    return detect_onsets(diag.energy, diag.notes);
  });

  double tempo = 120.0;
  try {
    diag.beat_period_s = estimate_beat_period(diag.onsets);
    tempo = estimate_tempo(diag.onsets, cfg.tempo_fold_min, cfg.tempo_fold_max);
  } catch (const Error& e) {
    if (e.code() != Errc::insufficient_onsets) throw StageError("tempo", e);
    diag.tempo_fallback = true;  // a lone sustained note still transcribes
    diag.beat_period_s = 60.0 / tempo;
  }

  TimeSignature ts{4, 4};
  try {
    ts = detect_time_signature(diag.onsets, diag.energy, tempo,
                               cfg.ts_candidates);
  } catch (const Error& e) {
    if (e.code() != Errc::too_short) throw StageError("time_signature", e);
    diag.ts_fallback = true;
  }

  result.score = run_stage("quantize", [&] {
    return quantize(diag.notes, tempo, ts, cfg.grid);
  });
  return result;
}

namespace {

using nlohmann::json;

void get_if(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = j.at(key).get<double>();
}
void get_if(const json& j, const char* key, int& out) {
  if (j.contains(key)) out = j.at(key).get<int>();
}
void get_if(const json& j, const char* key, bool& out) {
  if (j.contains(key)) out = j.at(key).get<bool>();
}

}  // namespace

PipelineConfig pipeline_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(Errc::io_failure, std::string("bad config JSON: ") + e.what());
  }

  static const char* known[] = {
      "frame_size",    "hop",           "silence_threshold",
      "gate_threshold", "window_ms",    "gate_enabled",
      "energy_rise_ratio", "min_note_frames", "rest_floor",
      "tempo_fold_min", "tempo_fold_max", "ts_candidates",
      "grid",          "ppq",           "program"};
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok)
      throw Error(Errc::io_failure, "unknown config key: " + key);
  }

  PipelineConfig cfg;
  try {
    get_if(j, "frame_size", cfg.frame_size);
    get_if(j, "hop", cfg.hop);
    get_if(j, "silence_threshold", cfg.preprocess.silence_threshold);
    get_if(j, "gate_threshold", cfg.preprocess.gate_threshold);
    get_if(j, "window_ms", cfg.preprocess.window_ms);
    get_if(j, "gate_enabled", cfg.gate_enabled);
    get_if(j, "energy_rise_ratio", cfg.segmentation.energy_rise_ratio);
    get_if(j, "min_note_frames", cfg.segmentation.min_note_frames);
    get_if(j, "rest_floor", cfg.segmentation.rest_floor);
    get_if(j, "tempo_fold_min", cfg.tempo_fold_min);
    get_if(j, "tempo_fold_max", cfg.tempo_fold_max);
    get_if(j, "grid", cfg.grid);
    get_if(j, "ppq", cfg.ppq);
    get_if(j, "program", cfg.program);
    if (j.contains("ts_candidates"))
      cfg.ts_candidates = j.at("ts_candidates").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw Error(Errc::io_failure, std::string("bad config JSON: ") + e.what());
  }
  return cfg;
}

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
  json j = {{"frame_size", cfg.frame_size},
            {"hop", cfg.hop},
            {"silence_threshold", cfg.preprocess.silence_threshold},
            {"gate_threshold", cfg.preprocess.gate_threshold},
            {"window_ms", cfg.preprocess.window_ms},
            {"gate_enabled", cfg.gate_enabled},
            {"energy_rise_ratio", cfg.segmentation.energy_rise_ratio},
            {"min_note_frames", cfg.segmentation.min_note_frames},
            {"rest_floor", cfg.segmentation.rest_floor},
            {"tempo_fold_min", cfg.tempo_fold_min},
            {"tempo_fold_max", cfg.tempo_fold_max},
            {"ts_candidates", cfg.ts_candidates},
            {"grid", cfg.grid},
            {"ppq", cfg.ppq},
            {"program", cfg.program}};
  return j.dump(2) + "\n";
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return pipeline_config_from_json(text);
}

}  // namespace monomt
