#include "monomt/pitch.hpp"

#include <cmath>
#include <string>

#include "monomt/error.hpp"
#include "monomt/segmentation.hpp"
#include "monomt/spectral.hpp"

namespace monomt {

double midi_to_freq(int midi) {
  if (midi < 0 || midi > 127)
    throw Error(Errc::out_of_range,
                "midi " + std::to_string(midi) + " outside 0..127");
  return 440.0 * std::exp2((midi - 69) / 12.0);
}

PitchTable::PitchTable() {
  for (int m = 0; m < 128; ++m) freqs_[static_cast<size_t>(m)] = midi_to_freq(m);
}

DichotomyResult dichotomy_minimize(
    const std::function<double(double)>& f, const DichotomySpec& spec,
    const std::function<void(int, double)>& observer) {
  if (!(spec.a < spec.b))
    throw Error(Errc::invalid_interval, "need a < b");
  if (!(spec.eps > 0.0) || !(spec.eps < (spec.b - spec.a) / 2.0))
    throw Error(Errc::invalid_interval, "need 0 < eps < (b-a)/2");
  if (spec.max_iter < 1)
    throw Error(Errc::invalid_interval, "need max_iter >= 1");

  double a = spec.a;
  double b = spec.b;
  int n = 0;
  while (b - a > 2.0 * spec.eps && n < spec.max_iter) {
    ++n;
    const double mid = (a + b) / 2.0;
    if (observer) observer(n, mid);
    const double x1 = mid - spec.eps / 2.0;
    const double x2 = mid + spec.eps / 2.0;
    // The half certified to contain the minimum of a unimodal function.
    if (f(x1) < f(x2))
      b = x2;
    else
      a = x1;
  }
  return {(a + b) / 2.0, n};
}

SnapResult snap_frequency(double freq_hz, const PitchTable& table) {
  if (!(freq_hz > 0.0))
    throw Error(Errc::non_positive_frequency, "frequency must be positive");

  const auto& freqs = table.freqs();
  if (freq_hz <= freqs.front()) return {0, 1};
  if (freq_hz >= freqs.back()) return {127, 1};

  int lo = 0;
  int hi = 127;
  int iterations = 0;
  while (hi - lo > 1) {
    ++iterations;
    const int mid = (lo + hi) / 2;
    if (freqs[static_cast<size_t>(mid)] <= freq_hz)
      lo = mid;
    else
      hi = mid;
  }
  // Final comparison in log distance; a tie goes to the lower pitch.
  ++iterations;
  const double below = std::log(freq_hz / freqs[static_cast<size_t>(lo)]);
  const double above = std::log(freqs[static_cast<size_t>(hi)] / freq_hz);
  return {below <= above ? lo : hi, iterations};
}

int snap_frequency_continuous(double freq_hz, double eps) {
  if (!(freq_hz > 0.0))
    throw Error(Errc::non_positive_frequency, "frequency must be positive");

  const double log_f = std::log2(freq_hz);
  auto distance = [log_f](double m) {
    const double table_log = std::log2(440.0) + (m - 69.0) / 12.0;
    return std::fabs(log_f - table_log);
  };
  const auto res =
      dichotomy_minimize(distance, {-0.5, 127.5, eps, 64});
  const int midi = static_cast<int>(std::lround(res.x));
  return std::clamp(midi, 0, 127);
}

PitchTrack build_pitch_track(const AudioBuffer& buf, int frame_size, int hop) {
  if (hop <= 0 || hop > frame_size)
    throw Error(Errc::out_of_range, "need 0 < hop <= frame_size");
  if (buf.samples.size() < static_cast<std::size_t>(frame_size))
    throw Error(Errc::buffer_too_short,
                std::to_string(buf.samples.size()) + " samples < frame size " +
                    std::to_string(frame_size));

  const auto energies = energy_track(buf, frame_size, hop);
  static const PitchTable table;

  PitchTrack track;
  track.frame_size = frame_size;
  track.hop = hop;
  track.sample_rate = buf.sample_rate;
  track.frames.reserve(energies.size());

  for (std::size_t k = 0; k < energies.size(); ++k) {
    const std::size_t offset = k * static_cast<std::size_t>(hop);
    const Frame frame{
        std::span<const double>(buf.samples).subspan(offset,
                                                     static_cast<std::size_t>(frame_size)),
        static_cast<double>(offset) / buf.sample_rate, buf.sample_rate};
    const auto peak = dominant_frequency(frame, true);

    PitchFrame pf;
    pf.time_s = energies[k].time_s;
    pf.energy = energies[k].rms;
    pf.freq_hz = peak.freq_hz;
    if (peak.freq_hz > 0.0) {
      const auto snap = snap_frequency(peak.freq_hz, table);
      pf.midi = snap.midi;
      pf.snap_iterations = snap.iterations;
    }
    track.frames.push_back(pf);
  }
  return track;
}

}  // namespace monomt
