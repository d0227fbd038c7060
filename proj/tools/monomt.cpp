// Command-line front end: transcribe / synth / eval / inspect.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "monomt/audio_io.hpp"
#include "monomt/error.hpp"
#include "monomt/eval.hpp"
#include "monomt/midi.hpp"
#include "monomt/pipeline.hpp"
#include "monomt/pitch.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitUsage = 2;

monomt::PipelineConfig base_config() {
  if (const char* path = std::getenv("MONOMT_CONFIG"); path && *path)
    return monomt::load_pipeline_config(path);
  return {};
}

void add_pipeline_flags(CLI::App* cmd, monomt::PipelineConfig& cfg,
                        bool& no_gate) {
  cmd->add_option("--frame-size", cfg.frame_size,
                  "analysis frame length (power of two)");
  cmd->add_option("--hop", cfg.hop, "hop between frames in samples");
  cmd->add_option("--silence-threshold", cfg.preprocess.silence_threshold,
                  "trim threshold as a fraction of peak window RMS");
  cmd->add_option("--gate-threshold", cfg.preprocess.gate_threshold,
                  "absolute RMS floor for the noise gate");
  cmd->add_option("--window-ms", cfg.preprocess.window_ms,
                  "silence-analysis window in milliseconds");
  cmd->add_flag("--no-gate", no_gate, "bypass the noise gate");
  cmd->add_option("--rho", cfg.segmentation.energy_rise_ratio,
                  "same-pitch re-attack energy ratio");
  cmd->add_option("--min-note-frames", cfg.segmentation.min_note_frames,
                  "shortest run kept as a note");
  cmd->add_option("--rest-floor", cfg.segmentation.rest_floor,
                  "RMS below which a frame is a rest");
  cmd->add_option("--ts-candidates", cfg.ts_candidates,
                  "time-signature numerators to score")
      ->delimiter(',');
  cmd->add_option("--grid", cfg.grid, "quantization grid (subdivisions per beat)");
  cmd->add_option("--ppq", cfg.ppq, "MIDI ticks per quarter note");
  cmd->add_option("--program", cfg.program, "MIDI program number (0 = piano)");
}

std::string ts_string(const monomt::TimeSignature& ts) {
  return std::to_string(ts.numerator) + "/" + std::to_string(ts.denominator);
}

json score_summary(const monomt::QuantizedScore& score) {
  return json{{"tempo_bpm", score.tempo_bpm},
              {"time_signature", {score.time_signature.numerator,
                                  score.time_signature.denominator}},
              {"bar_count", score.bar_count},
              {"note_count", score.notes.size()}};
}

monomt::ScoreSpec to_score_spec(const monomt::QuantizedScore& q) {
  monomt::ScoreSpec spec;
  spec.tempo_bpm = q.tempo_bpm;
  spec.time_signature = q.time_signature;
  for (const auto& n : q.notes)
    spec.notes.push_back({n.midi, n.onset_beats, n.duration_beats, 1.0});
  return spec;
}

int run_transcribe(const std::vector<std::string>& inputs,
                   const std::string& out_path, const std::string& score_path,
                   monomt::PipelineConfig cfg, bool no_gate, bool as_json) {
  if (no_gate) cfg.gate_enabled = false;
  if (inputs.size() > 1 && (!out_path.empty() || !score_path.empty())) {
    std::cerr << "error: --out/--score only apply to a single input\n";
    return kExitUsage;
  }

  for (const auto& input : inputs) {
    const auto buf = monomt::read_wav(input);
    const auto result = monomt::transcribe(buf, cfg);

    std::string midi_out = out_path;
    if (midi_out.empty())
      midi_out = std::filesystem::path(input).replace_extension(".mid").string();
    monomt::write_midi(result.score, midi_out, cfg.ppq, cfg.program);

    if (!score_path.empty())
      monomt::save_score(to_score_spec(result.score), score_path);

    if (as_json) {
      json j = score_summary(result.score);
      j["input"] = input;
      j["midi_path"] = midi_out;
      if (!score_path.empty()) j["score_path"] = score_path;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << input << ":\n"
                << "  tempo:          " << result.score.tempo_bpm << " BPM\n"
                << "  time signature: " << ts_string(result.score.time_signature)
                << "\n"
                << "  bars:           " << result.score.bar_count << "\n"
                << "  notes:          " << result.score.notes.size() << "\n"
                << "  wrote:          " << midi_out << "\n";
    }
  }
  return kExitOk;
}

int run_synth(const std::string& score_path, const std::string& out_path,
              int sample_rate, const std::string& timbre, int harmonics,
              double decay) {
  monomt::SynthConfig synth;
  synth.timbre = timbre == "harmonic" ? monomt::Timbre::harmonic
                                      : monomt::Timbre::pure_sine;
  synth.harmonics = harmonics;
  synth.decay = decay;

  const auto score = monomt::load_score(score_path);
  const auto buf = monomt::synth_melody(score, sample_rate, synth);
  monomt::write_wav(buf, out_path);
  std::cout << "wrote " << out_path << " (" << buf.duration_seconds()
            << " s at " << sample_rate << " Hz)\n";
  return kExitOk;
}

int run_eval(const std::string& ref_path, const std::string& hyp_path,
             double onset_tol, bool octave_invariant, bool as_json) {
  const auto ref = monomt::load_score(ref_path);
  const auto hyp = monomt::read_midi(hyp_path);
  const auto report = monomt::match_notes(ref, hyp, onset_tol, octave_invariant);

  const json j = {{"precision", report.precision},
                  {"recall", report.recall},
                  {"f_measure", report.f_measure},
                  {"matched", report.matched},
                  {"octave_errors", report.octave_errors},
                  {"pitch_errors", report.pitch_errors},
                  {"timing_errors", report.timing_errors}};
  std::cout << j.dump(2) << "\n";

  if (!as_json) {
    std::cerr << "precision " << report.precision << "  recall "
              << report.recall << "  F " << report.f_measure << "  ("
              << report.matched << " matched, " << report.octave_errors
              << " octave, " << report.pitch_errors << " pitch, "
              << report.timing_errors << " timing)\n";
  }
  return kExitOk;
}

int run_inspect(const std::string& input, const std::string& out_path,
                monomt::PipelineConfig cfg, bool no_gate) {
  if (no_gate) cfg.gate_enabled = false;

  auto buf = monomt::read_wav(input);
  buf = monomt::trim_silence(buf, cfg.preprocess);
  if (cfg.gate_enabled) buf = monomt::noise_gate(buf, cfg.preprocess);
  buf = monomt::normalize(buf);
  const auto track = monomt::build_pitch_track(buf, cfg.frame_size, cfg.hop);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw monomt::Error(monomt::Errc::io_failure,
                                   "cannot open " + out_path + " for writing");
    out = &file;
  }
  *out << "time_s,freq_hz,midi,energy\n";
  for (const auto& frame : track.frames) {
    *out << frame.time_s << "," << frame.freq_hz << ","
         << (frame.midi ? *frame.midi : -1) << "," << frame.energy << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monomt: monophonic WAV-to-MIDI transcription"};
  app.require_subcommand(1);

  monomt::PipelineConfig cfg;
  try {
    cfg = base_config();
  } catch (const monomt::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return kExitDomainError;
  }
  bool no_gate = false;
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-parseable stdout");

  // transcribe
  auto* transcribe = app.add_subcommand("transcribe", "WAV in, MIDI out");
  std::vector<std::string> inputs;
  std::string out_path;
  std::string score_path;
  transcribe->add_option("input", inputs, "input WAV file(s)")
      ->required()
      ->check(CLI::ExistingFile);
  transcribe->add_option("--out", out_path, "output MIDI path");
  transcribe->add_option("--score", score_path, "also write the score as JSON");
  add_pipeline_flags(transcribe, cfg, no_gate);

  // synth
  auto* synth = app.add_subcommand("synth", "render a score JSON to WAV");
  std::string synth_score;
  std::string synth_out = "out.wav";
  int sample_rate = 44100;
  std::string timbre = "pure_sine";
  int harmonics = 3;
  double decay = 0.5;
  synth->add_option("score", synth_score, "ScoreSpec JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", synth_out, "output WAV path");
  synth->add_option("--sr", sample_rate, "sample rate in Hz");
  synth->add_option("--timbre", timbre, "pure_sine or harmonic")
      ->check(CLI::IsMember({"pure_sine", "harmonic"}));
  synth->add_option("--harmonics", harmonics, "partials above the fundamental");
  synth->add_option("--decay", decay, "amplitude ratio between partials");

  // eval
  auto* eval = app.add_subcommand("eval", "score a transcription against a reference");
  std::string ref_path;
  std::string hyp_path;
  double onset_tol = 0.25;
  bool octave_invariant = false;
  eval->add_option("reference", ref_path, "reference ScoreSpec JSON")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("hypothesis", hyp_path, "hypothesis MIDI file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--onset-tol", onset_tol, "onset tolerance in beats");
  eval->add_flag("--octave-invariant", octave_invariant,
                 "match pitches modulo one octave");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "dump per-frame pitch/energy CSV");
  std::string inspect_input;
  std::string inspect_out;
  inspect->add_option("input", inspect_input, "input WAV file")
      ->required()
      ->check(CLI::ExistingFile);
  inspect->add_option("--out", inspect_out, "CSV path (stdout when omitted)");
  add_pipeline_flags(inspect, cfg, no_gate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(transcribe))
      return run_transcribe(inputs, out_path, score_path, cfg, no_gate, as_json);
    if (app.got_subcommand(synth))
      return run_synth(synth_score, synth_out, sample_rate, timbre, harmonics,
                       decay);
    if (app.got_subcommand(eval))
      return run_eval(ref_path, hyp_path, onset_tol, octave_invariant, as_json);
    if (app.got_subcommand(inspect))
      return run_inspect(inspect_input, inspect_out, cfg, no_gate);
  } catch (const monomt::StageError& e) {
    std::cerr << "error: " << e.name() << " at stage " << e.stage() << ": "
              << e.what() << "\n";
    return kExitDomainError;
  } catch (const monomt::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}
