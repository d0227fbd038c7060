#include "monomt/rhythm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "monomt/error.hpp"

namespace monomt {

namespace {

constexpr double kDedupWindowS = 0.050;
constexpr double kIoiBinS = 0.020;

/// Half-wave-rectified energy derivative peaks above 3x their median.
/// The median of the rectified derivative is zero on sustained tones, so
/// a floor at 5% of the peak RMS keeps micro-wobble out.
std::vector<std::pair<double, double>> energy_rise_peaks(
    std::span<const EnergyPoint> energy) {
  std::vector<std::pair<double, double>> peaks;  // (time, strength)
  if (energy.size() < 3) return peaks;

  std::vector<double> d(energy.size(), 0.0);
  double peak_rms = 0.0;
  for (std::size_t i = 1; i < energy.size(); ++i) {
    d[i] = std::max(0.0, energy[i].rms - energy[i - 1].rms);
    peak_rms = std::max(peak_rms, energy[i].rms);
  }

  std::vector<double> sorted(d.begin() + 1, d.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double threshold = std::max(3.0 * median, 0.05 * peak_rms);

  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    if (d[i] > threshold && d[i] > d[i - 1] && d[i] >= d[i + 1])
      peaks.emplace_back(energy[i].time_s, d[i]);
  }
  return peaks;
}

}  // namespace

std::vector<double> detect_onsets(std::span<const EnergyPoint> energy,
                                  std::span<const NoteEvent> notes) {
  std::vector<double> candidates;
  for (const auto& n : notes) candidates.push_back(n.onset_s);
  for (const auto& [t, strength] : energy_rise_peaks(energy))
    candidates.push_back(t);
  std::sort(candidates.begin(), candidates.end());

  std::vector<double> onsets;
  for (double t : candidates) {
    if (onsets.empty() || t - onsets.back() > kDedupWindowS)
      onsets.push_back(t);
  }
  if (onsets.empty()) throw Error(Errc::no_onsets, "no onset candidates");
  return onsets;
}

double estimate_beat_period(std::span<const double> onsets) {
  if (onsets.size() < 2)
    throw Error(Errc::insufficient_onsets, "need at least 2 onsets");

  std::vector<double> sorted(onsets.begin(), onsets.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> iois;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double d = sorted[i] - sorted[i - 1];
    if (d > 1e-3) iois.push_back(d);
  }
  if (iois.empty())
    throw Error(Errc::insufficient_onsets, "no positive inter-onset interval");

  // Each IOI votes at itself and, with reduced weight, at its /2 and /3
  // fractions so half notes and dotted values reinforce the beat.
  std::vector<std::pair<double, double>> votes;  // (period, weight)
  for (double d : iois) {
    votes.emplace_back(d, 1.0);
    votes.emplace_back(d / 2.0, 0.5);
    votes.emplace_back(d / 3.0, 1.0 / 3.0);
  }

  std::map<long long, double> bins;
  for (const auto& [p, w] : votes) bins[std::llround(p / kIoiBinS)] += w;

  // Pool each bin with its neighbors: onset jitter puts the true period's
  // votes astride a bin edge, and unpooled counts then lose to a longer
  // period whose (relatively tighter) votes stay in one bin.
  auto pooled = [&bins](long long idx) {
    double total = 0.0;
    for (long long k = idx - 1; k <= idx + 1; ++k) {
      const auto it = bins.find(k);
      if (it != bins.end()) total += it->second;
    }
    return total;
  };

  // Sub-0.15 s bins may collect fraction votes but are not credible beat
  // periods on their own.
  const long long min_idx = std::llround(0.15 / kIoiBinS);
  double best_weight = 0.0;
  bool any_eligible = false;
  for (const auto& [idx, w] : bins) {
    if (idx < min_idx) continue;
    any_eligible = true;
    best_weight = std::max(best_weight, pooled(idx));
  }
  if (!any_eligible)
    for (const auto& [idx, w] : bins)
      best_weight = std::max(best_weight, pooled(idx));

  // Near-ties resolve to the shorter period: subdivision evidence beats a
  // sparser multiple-length reading.
  long long best_idx = 0;
  for (const auto& [idx, w] : bins) {
    if (any_eligible && idx < min_idx) continue;
    if (pooled(idx) >= 0.98 * best_weight) {
      best_idx = idx;
      break;
    }
  }

  const double center = static_cast<double>(best_idx) * kIoiBinS;
  double wsum = 0.0;
  double psum = 0.0;
  for (const auto& [p, w] : votes) {
    if (std::fabs(p - center) <= kIoiBinS) {
      wsum += w;
      psum += w * p;
    }
  }
  double period = wsum > 0.0 ? psum / wsum : center;

  // Least-squares fit over integer beat multiples: long intervals carry
  // their full weight, which pins the period far better than one bin.
  double num = 0.0;
  double den = 0.0;
  for (double d : iois) {
    const double k = std::round(d / period);
    if (k >= 1.0 && std::fabs(d - k * period) <= 0.3 * period) {
      num += k * d;
      den += k * k;
    }
  }
  if (den > 0.0) period = num / den;
  return period;
}

double estimate_tempo(std::span<const double> onsets, double fold_min,
                      double fold_max) {
  double bpm = 60.0 / estimate_beat_period(onsets);
  // One BPM of slack keeps estimates that jitter across the exact fold
  // boundary from flipping a whole octave.
  while (bpm < fold_min - 1.0) bpm *= 2.0;
  while (bpm > fold_max + 1.0) bpm /= 2.0;
  return bpm;
}

TimeSignature detect_time_signature(std::span<const double> onsets,
                                    std::span<const EnergyPoint> energy,
                                    double tempo_bpm,
                                    std::span<const int> candidates) {
  if (onsets.empty() || !(tempo_bpm > 0.0))
    throw Error(Errc::too_short, "no onsets or invalid tempo");

  const double period = 60.0 / tempo_bpm;
  const double t0 = *std::min_element(onsets.begin(), onsets.end());
  const double t_end = energy.empty() ? t0 : energy.back().time_s;
  const auto slots =
      static_cast<long>(std::floor((t_end - t0) / period)) + 1;
  if (slots < 2) throw Error(Errc::too_short, "under one bar of material");

  std::vector<double> accent(static_cast<std::size_t>(slots), 0.0);
  for (const auto& [t, strength] : energy_rise_peaks(energy)) {
    const auto slot = static_cast<long>(std::llround((t - t0) / period));
    if (slot >= 0 && slot < slots) accent[static_cast<std::size_t>(slot)] += strength;
  }

  double mean = 0.0;
  for (double a : accent) mean += a;
  mean /= static_cast<double>(accent.size());
  for (double& a : accent) a -= mean;

  struct Scored {
    int numerator;
    double score;
  };
  std::vector<Scored> scored;
  for (int n : candidates) {
    if (n < 1 || slots < 2 * n) continue;  // need two bars to autocorrelate
    double acc = 0.0;
    const std::size_t pairs = accent.size() - static_cast<std::size_t>(n);
    for (std::size_t k = 0; k < pairs; ++k)
      acc += accent[k] * accent[k + static_cast<std::size_t>(n)];
    scored.push_back({n, acc / static_cast<double>(pairs)});
  }
  if (scored.empty())
    throw Error(Errc::too_short, "fewer than two bars for every candidate");

  double best = scored.front().score;
  for (const auto& s : scored) best = std::max(best, s.score);

  auto eligible = [&](int numerator) {
    for (const auto& s : scored) {
      if (s.numerator != numerator) continue;
      if (best <= 0.0) return true;  // flat or anti-correlated: treat as tie
      return s.score >= best - 0.05 * std::fabs(best);
    }
    return false;
  };

  // Ties resolve to common time, then triple time.
  if (eligible(4)) return {4, 4};
  if (eligible(3)) return {3, 4};
  for (const auto& s : scored)
    if (s.score == best) return {s.numerator, 4};
  return {scored.front().numerator, 4};
}

double representable_tempo(double bpm) {
  const double us = std::round(60e6 / bpm);
  return 60e6 / us;
}

QuantizedScore quantize(std::span<const NoteEvent> notes, double tempo_bpm,
                        TimeSignature ts, int grid) {
  if (!(tempo_bpm > 0.0))
    throw Error(Errc::out_of_range, "tempo must be positive");
  if (grid < 1) throw Error(Errc::out_of_range, "grid must be >= 1");

  const double g = static_cast<double>(grid);
  const double bps = tempo_bpm / 60.0;

  QuantizedScore score;
  score.tempo_bpm = representable_tempo(tempo_bpm);
  score.time_signature = ts;

  for (const auto& ev : notes) {
    QuantizedNote qn;
    qn.midi = ev.midi;
    qn.onset_beats = std::round(ev.onset_s * bps * g) / g;
    qn.duration_beats = std::max(1.0 / g, std::round(ev.duration_s * bps * g) / g);
    score.notes.push_back(qn);
  }

  // Rounding can create <= one-grid-step overlaps in a monophonic stream;
  // truncate the earlier note, dropping it if nothing remains.
  for (std::size_t i = 0; i + 1 < score.notes.size();) {
    auto& cur = score.notes[i];
    const auto& next = score.notes[i + 1];
    if (cur.onset_beats + cur.duration_beats > next.onset_beats) {
      cur.duration_beats = next.onset_beats - cur.onset_beats;
      if (cur.duration_beats < 0.5 / g) {
        score.notes.erase(score.notes.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
    }
    ++i;
  }

  const double total = score.total_beats();
  score.bar_count = std::max(
      1, static_cast<int>(std::ceil(total / ts.numerator - 1e-9)));
  return score;
}

}  // namespace monomt
