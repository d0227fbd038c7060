#pragma once

#include "monomt/types.hpp"

namespace monomt {

struct PreprocessConfig {
  double silence_threshold = 0.02;  // fraction of global peak window RMS
  double gate_threshold = 0.01;     // absolute RMS floor
  double window_ms = 20.0;
};

/// Cuts leading/trailing windows whose RMS falls below
/// silence_threshold x (peak window RMS). Cuts happen on window
/// boundaries, which makes the operation exactly idempotent.
/// Throws AllSilent when no window qualifies.
AudioBuffer trim_silence(const AudioBuffer& buf, const PreprocessConfig& cfg = {});

/// Zeroes every analysis window whose RMS is below the absolute gate
/// threshold. Length-preserving.
AudioBuffer noise_gate(const AudioBuffer& buf, const PreprocessConfig& cfg = {});

/// Scales the buffer so the peak absolute sample is 1.0.
/// Throws AllZero for an all-zero buffer.
AudioBuffer normalize(const AudioBuffer& buf);

}  // namespace monomt
