#include "monomt/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "monomt/error.hpp"

namespace monomt {

namespace {

std::size_t window_samples(const AudioBuffer& buf, const PreprocessConfig& cfg) {
  const auto w = static_cast<std::size_t>(
      std::lround(cfg.window_ms * 1e-3 * buf.sample_rate));
  return std::max<std::size_t>(1, w);
}

// RMS per non-overlapping window, final partial window included.
std::vector<double> window_rms(const AudioBuffer& buf, std::size_t w) {
  const std::size_t n = buf.samples.size();
  std::vector<double> rms;
  rms.reserve(n / w + 1);
  for (std::size_t start = 0; start < n; start += w) {
    const std::size_t end = std::min(n, start + w);
    double acc = 0.0;
    for (std::size_t i = start; i < end; ++i)
      acc += buf.samples[i] * buf.samples[i];
    rms.push_back(std::sqrt(acc / static_cast<double>(end - start)));
  }
  return rms;
}

}  // namespace

AudioBuffer trim_silence(const AudioBuffer& buf, const PreprocessConfig& cfg) {
  if (buf.samples.empty()) throw Error(Errc::empty_audio, "empty buffer");

  const std::size_t w = window_samples(buf, cfg);
  const auto rms = window_rms(buf, w);
  const double peak = *std::max_element(rms.begin(), rms.end());
  const double threshold = cfg.silence_threshold * peak;

  std::size_t first = rms.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < rms.size(); ++i) {
    if (rms[i] >= threshold && rms[i] > 0.0) {
      if (first == rms.size()) first = i;
      last = i;
    }
  }
  if (first == rms.size())
    throw Error(Errc::all_silent, "no window above silence threshold");

  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  const std::size_t begin = first * w;
  const std::size_t end = std::min(buf.samples.size(), (last + 1) * w);
  out.samples.assign(buf.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                     buf.samples.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

AudioBuffer noise_gate(const AudioBuffer& buf, const PreprocessConfig& cfg) {
  if (buf.samples.empty()) throw Error(Errc::empty_audio, "empty buffer");

  const std::size_t w = window_samples(buf, cfg);
  const auto rms = window_rms(buf, w);

  AudioBuffer out = buf;
  for (std::size_t i = 0; i < rms.size(); ++i) {
    if (rms[i] < cfg.gate_threshold) {
      const std::size_t start = i * w;
      const std::size_t end = std::min(out.samples.size(), start + w);
      std::fill(out.samples.begin() + static_cast<std::ptrdiff_t>(start),
                out.samples.begin() + static_cast<std::ptrdiff_t>(end), 0.0);
    }
  }
  return out;
}

AudioBuffer normalize(const AudioBuffer& buf) {
  double peak = 0.0;
  for (double s : buf.samples) peak = std::max(peak, std::fabs(s));
  if (peak == 0.0) throw Error(Errc::all_zero, "buffer has no nonzero sample");

  AudioBuffer out = buf;
  const double scale = 1.0 / peak;
  for (auto& s : out.samples) s *= scale;
  return out;
}

}  // namespace monomt
