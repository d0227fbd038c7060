#include "monomt/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "monomt/error.hpp"

namespace monomt {

std::vector<EnergyPoint> energy_track(const AudioBuffer& buf, int frame_size,
                                      int hop) {
  if (hop <= 0 || hop > frame_size)
    throw Error(Errc::out_of_range, "need 0 < hop <= frame_size");
  const std::size_t n = buf.samples.size();
  if (n < static_cast<std::size_t>(frame_size))
    throw Error(Errc::buffer_too_short,
                std::to_string(n) + " samples < frame size " +
                    std::to_string(frame_size));

  std::vector<EnergyPoint> out;
  for (std::size_t offset = 0; offset + frame_size <= n;
       offset += static_cast<std::size_t>(hop)) {
    double acc = 0.0;
    for (std::size_t i = offset; i < offset + static_cast<std::size_t>(frame_size); ++i)
      acc += buf.samples[i] * buf.samples[i];
    EnergyPoint p;
    p.time_s = (static_cast<double>(offset) + frame_size / 2.0) / buf.sample_rate;
    p.rms = std::sqrt(acc / frame_size);
    out.push_back(p);
  }
  return out;
}

namespace {

struct Run {
  int midi = 0;
  std::size_t start = 0;  // frame index
  std::size_t count = 0;
  double peak_energy = 0.0;
};

}  // namespace

std::vector<NoteEvent> segment_notes(const PitchTrack& track,
                                     const SegmentationConfig& cfg) {
  if (track.frames.empty()) throw Error(Errc::empty_track, "no frames");

  const auto& frames = track.frames;
  const std::size_t n = frames.size();

  // Single-frame +-12 jumps between identical neighbors are FFT octave
  // flickers, not notes.
  std::vector<std::optional<int>> midi(n);
  for (std::size_t i = 0; i < n; ++i) midi[i] = frames[i].midi;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (midi[i - 1] && midi[i] && midi[i + 1] && *midi[i - 1] == *midi[i + 1] &&
        std::abs(*midi[i] - *midi[i - 1]) == 12)
      midi[i] = midi[i - 1];
  }

  auto is_rest = [&](std::size_t i) {
    return !midi[i].has_value() || frames[i].energy < cfg.rest_floor;
  };

  std::vector<Run> runs;
  Run cur;
  bool open = false;
  double prev_energy = 0.0;

  auto close = [&]() {
    if (open) runs.push_back(cur);
    open = false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (is_rest(i)) {
      close();
      continue;
    }
    const int p = *midi[i];
    const double e = frames[i].energy;
    const bool reattack =
        open && p == cur.midi && e >= cfg.energy_rise_ratio * prev_energy;
    if (!open || p != cur.midi || reattack) {
      close();
      cur = Run{p, i, 1, e};
      open = true;
    } else {
      ++cur.count;
      cur.peak_energy = std::max(cur.peak_energy, e);
    }
    prev_energy = e;
  }
  close();

  // Debounce: short runs merge into an adjacent same-pitch predecessor,
  // otherwise they are dropped.
  std::vector<Run> kept;
  for (const auto& run : runs) {
    if (run.count >= static_cast<std::size_t>(cfg.min_note_frames)) {
      kept.push_back(run);
      continue;
    }
    if (!kept.empty() && kept.back().midi == run.midi &&
        kept.back().start + kept.back().count == run.start) {
      kept.back().count += run.count;
      kept.back().peak_energy = std::max(kept.back().peak_energy, run.peak_energy);
    }
    // else dropped
  }

  const double hop_s = static_cast<double>(track.hop) / track.sample_rate;
  std::vector<NoteEvent> notes;
  notes.reserve(kept.size());
  for (const auto& run : kept) {
    NoteEvent ev;
    ev.midi = run.midi;
    // Frame times are centers; a run's first frame became dominant about
    // half a hop earlier. A run starting at frame 0 starts with the buffer.
    ev.onset_s = run.start == 0
                     ? 0.0
                     : std::max(0.0, frames[run.start].time_s - hop_s / 2.0);
    ev.duration_s = static_cast<double>(run.count) * hop_s;
    ev.peak_energy = run.peak_energy;
    notes.push_back(ev);
  }
  return notes;
}

}  // namespace monomt
