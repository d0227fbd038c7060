#pragma once

#include <complex>
#include <span>
#include <vector>

#include "monomt/types.hpp"

namespace monomt {

/// A fixed-length analysis slice. Length must be a power of two >= 16.
struct Frame {
  std::span<const double> samples;
  double start_time_s = 0.0;
  int sample_rate = 44100;
};

enum class FftDirection { forward, inverse };

/// Hann weights w[i] = 0.5 * (1 - cos(2*pi*i/(n-1))); endpoints are zero.
std::vector<double> hann_window(std::size_t n);

/// Radix-2 Cooley-Tukey transform, in place. Forward computes
/// X[k] = sum x[n] exp(-2*pi*i*k*n/N); inverse applies the conjugate
/// transform and scales by 1/N. Throws NonPowerOfTwo.
void fft_inplace(std::span<std::complex<double>> data, FftDirection dir);

std::vector<std::complex<double>> fft(std::vector<std::complex<double>> data,
                                      FftDirection dir = FftDirection::forward);

/// Direct O(N^2) DFT by the definition. Any length >= 1. Kept as the
/// correctness reference for the fast path.
std::vector<std::complex<double>> naive_dft(
    std::span<const std::complex<double>> data);

struct PeakEstimate {
  double freq_hz = 0.0;
  double magnitude = 0.0;
};

/// Dominant-frequency estimate for one frame: optional Hann window,
/// forward FFT, argmax over bins 1..N/2-1, then parabolic interpolation
/// of log magnitudes around the peak. A frame whose peak magnitude does
/// not exceed 5x the median bin magnitude is unvoiced and yields {0, 0}.
PeakEstimate dominant_frequency(const Frame& frame, bool windowed = true);

}  // namespace monomt
