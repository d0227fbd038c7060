#include "monomt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "monomt/error.hpp"

namespace monomt {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void require_power_of_two(std::size_t n) {
  if (!power_of_two(n))
    throw Error(Errc::non_power_of_two,
                "length " + std::to_string(n) + " is not a power of two");
}

}  // namespace

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(kTau * static_cast<double>(i) /
                                 static_cast<double>(n - 1)));
  return w;
}

void fft_inplace(std::span<std::complex<double>> data, FftDirection dir) {
  const std::size_t n = data.size();
  require_power_of_two(n);
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const double sign = dir == FftDirection::forward ? -1.0 : 1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        // Direct twiddle evaluation keeps rounding error well under the
        // 1e-9 agreement bound with the naive transform.
        const std::complex<double> w = std::polar(
            1.0, sign * kTau * static_cast<double>(k) / static_cast<double>(len));
        const std::complex<double> odd = data[start + k + half] * w;
        const std::complex<double> even = data[start + k];
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }

  if (dir == FftDirection::inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& v : data) v *= scale;
  }
}

std::vector<std::complex<double>> fft(std::vector<std::complex<double>> data,
                                      FftDirection dir) {
  fft_inplace(data, dir);
  return data;
}

std::vector<std::complex<double>> naive_dft(
    std::span<const std::complex<double>> data) {
  const std::size_t n = data.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      // Reduce k*i mod n before the trig call so large products do not
      // lose angular precision.
      const std::size_t r = (k * i) % n;
      acc += data[i] *
             std::polar(1.0, -kTau * static_cast<double>(r) / static_cast<double>(n));
    }
    out[k] = acc;
  }
  return out;
}

PeakEstimate dominant_frequency(const Frame& frame, bool windowed) {
  const std::size_t n = frame.samples.size();
  require_power_of_two(n);
  if (n < 16)
    throw Error(Errc::non_power_of_two,
                "frame length " + std::to_string(n) + " below minimum 16");

  std::vector<std::complex<double>> spec(n);
  if (windowed) {
    const auto w = hann_window(n);
    for (std::size_t i = 0; i < n; ++i) spec[i] = frame.samples[i] * w[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) spec[i] = frame.samples[i];
  }
  fft_inplace(spec, FftDirection::forward);

  const std::size_t half = n / 2;
  std::vector<double> mags(half);
  for (std::size_t k = 1; k < half; ++k) mags[k] = std::abs(spec[k]);

  std::size_t peak = 1;
  for (std::size_t k = 2; k < half; ++k)
    if (mags[k] > mags[peak]) peak = k;

  std::vector<double> sorted(mags.begin() + 1, mags.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];

  // Scale-free voicing decision: a real partial towers over the median
  // bin; broadband noise and silence do not.
  if (mags[peak] <= 5.0 * median || mags[peak] <= 0.0) return {0.0, 0.0};

  const double bin_hz = static_cast<double>(frame.sample_rate) /
                        static_cast<double>(n);
  double refined = static_cast<double>(peak);
  if (peak >= 2 && peak + 1 < half && mags[peak - 1] > 0.0 &&
      mags[peak + 1] > 0.0) {
    const double alpha = std::log(mags[peak - 1]);
    const double beta = std::log(mags[peak]);
    const double gamma = std::log(mags[peak + 1]);
    const double denom = alpha - 2.0 * beta + gamma;
    if (denom < 0.0) {
      double delta = 0.5 * (alpha - gamma) / denom;
      delta = std::clamp(delta, -1.0, 1.0);
      refined += delta;
    }
  }
  return {refined * bin_hz, mags[peak]};
}

}  // namespace monomt
