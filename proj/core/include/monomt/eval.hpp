#pragma once

#include "monomt/types.hpp"

namespace monomt {

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  int matched = 0;
  int octave_errors = 0;  // near-matches equal mod 12 but not equal
  int pitch_errors = 0;   // near-matches with unrelated pitch
  int timing_errors = 0;  // pitch-exact pairs within 2x tolerance but outside it
};

/// Note-level precision/recall/F-measure by greedy time-ordered one-to-one
/// matching: a hypothesis note matches a reference note when their onsets
/// differ by at most `onset_tol_beats` and pitches are equal (equal mod 12
/// when `octave_invariant`). Empty/empty scores as F = 1.
EvalReport match_notes(const ScoreSpec& ref, const QuantizedScore& hyp,
                       double onset_tol_beats = 0.25,
                       bool octave_invariant = false);

}  // namespace monomt
