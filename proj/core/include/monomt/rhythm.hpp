#pragma once

#include <span>
#include <vector>

#include "monomt/types.hpp"

namespace monomt {

/// Note onsets unioned with strong half-wave-rectified energy-derivative
/// peaks (> 3x their median), deduplicated within 50 ms keeping the
/// earliest. Throws NoOnsets when nothing qualifies.
std::vector<double> detect_onsets(std::span<const EnergyPoint> energy,
                                  std::span<const NoteEvent> notes);

/// Beat period in seconds, before any octave folding: mode of the
/// inter-onset-interval histogram (20 ms bins) where each IOI also votes,
/// with reduced weight, at its /2 and /3 fractions; near-tied bins resolve
/// to the longer period, and the winning period is refined by a
/// least-squares fit over integer beat multiples. Throws
/// InsufficientOnsets.
double estimate_beat_period(std::span<const double> onsets);

/// 60/period folded into [fold_min, fold_max] by doubling/halving.
double estimate_tempo(std::span<const double> onsets, double fold_min = 60.0,
                      double fold_max = 180.0);

/// Accent-autocorrelation meter classifier: energy-derivative peaks are
/// summed into beat slots, the demeaned accent sequence is autocorrelated
/// at each candidate lag, and the best lag wins; candidates scoring within
/// 5% of the best (or an all-flat pattern) resolve to 4 then 3.
/// Requires two bars of material for a candidate to be scored; throws
/// TooShort when no candidate qualifies.
TimeSignature detect_time_signature(std::span<const double> onsets,
                                    std::span<const EnergyPoint> energy,
                                    double tempo_bpm,
                                    std::span<const int> candidates);

/// Tempo representable by an integer microseconds-per-quarter value, so a
/// score survives an SMF round trip bit-exactly.
double representable_tempo(double bpm);

/// Rounds onsets/durations to the beat grid (1/grid beats, default 1/16),
/// clamps zero durations up to one grid step, resolves rounding overlaps,
/// and counts bars. Tempo is normalized via representable_tempo.
QuantizedScore quantize(std::span<const NoteEvent> notes, double tempo_bpm,
                        TimeSignature ts, int grid = 16);

}  // namespace monomt
