#pragma once

#include <array>
#include <functional>

#include "monomt/types.hpp"

namespace monomt {

/// Equal-temperament frequency for a MIDI number, A4 = 440 Hz anchor.
/// Throws OutOfRange for m outside 0..127.
double midi_to_freq(int midi);

/// The 128 equal-temperament frequencies, index = MIDI number.
class PitchTable {
 public:
  PitchTable();

  double freq(int midi) const { return freqs_.at(static_cast<size_t>(midi)); }
  const std::array<double, 128>& freqs() const { return freqs_; }

 private:
  std::array<double, 128> freqs_;
};

struct DichotomySpec {
  double a = 0.0;
  double b = 1.0;
  double eps = 1e-6;   // probe separation; must satisfy 0 < eps < (b-a)/2
  int max_iter = 64;
};

struct DichotomyResult {
  double x = 0.0;      // midpoint of the final interval
  int iterations = 0;  // interval halvings performed
};

/// Interval-halving minimization of a unimodal function: probe the two
/// points eps/2 either side of the midpoint, keep the half certified to
/// contain the minimum, stop when the interval is <= 2*eps or max_iter is
/// reached. `observer`, when set, receives (n, midpoint before the n-th
/// halving). Throws InvalidInterval on a malformed spec.
DichotomyResult dichotomy_minimize(
    const std::function<double(double)>& f, const DichotomySpec& spec,
    const std::function<void(int, double)>& observer = {});

struct SnapResult {
  int midi = 0;
  int iterations = 0;
};

/// Nearest MIDI pitch in log-frequency via bisection over the sorted
/// table. Frequencies below the table clamp to 0, above to 127; ties at a
/// log midpoint break to the lower MIDI number. Iteration count is always
/// <= 8. Throws NonPositiveFrequency.
SnapResult snap_frequency(double freq_hz, const PitchTable& table);

/// Same snap decision obtained through continuous dichotomy minimization
/// of the log-distance over the MIDI axis; cross-check for the search
/// variant above.
int snap_frequency_continuous(double freq_hz, double eps = 1e-9);

/// Framewise analysis: dominant frequency, RMS energy, and snapped MIDI
/// pitch per frame. Frame times are frame centers; a partial final frame
/// is dropped. Throws BufferTooShort when the buffer is shorter than one
/// frame.
PitchTrack build_pitch_track(const AudioBuffer& buf, int frame_size, int hop);

}  // namespace monomt
