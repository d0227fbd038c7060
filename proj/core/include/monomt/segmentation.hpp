#pragma once

#include <vector>

#include "monomt/types.hpp"

namespace monomt {

struct SegmentationConfig {
  double energy_rise_ratio = 1.5;  // rho: same-pitch re-attack threshold
  int min_note_frames = 2;
  double rest_floor = 0.01;        // frames below this RMS count as rests
};

/// Per-frame RMS, same frame/hop layout (and time labels) as
/// build_pitch_track. Throws BufferTooShort.
std::vector<EnergyPoint> energy_track(const AudioBuffer& buf, int frame_size,
                                      int hop);

/// Converts the framewise track into note events. A new note starts on a
/// pitch change, on a voiced frame after a rest, or on a same-pitch frame
/// whose energy rises to >= rho x the previous frame energy (re-attack).
/// Same pitch with lower-or-equal loudness continues the current note.
/// Runs shorter than min_note_frames merge into an adjacent same-pitch
/// predecessor or are dropped. Single-frame jumps of exactly +-12
/// semitones between identical neighbors are corrected before
/// segmentation. Throws EmptyTrack.
std::vector<NoteEvent> segment_notes(const PitchTrack& track,
                                     const SegmentationConfig& cfg = {});

}  // namespace monomt
