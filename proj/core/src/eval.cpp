#include "monomt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace monomt {

namespace {

bool pitch_class_equal(int a, int b) { return ((a - b) % 12 + 12) % 12 == 0; }

}  // namespace

EvalReport match_notes(const ScoreSpec& ref, const QuantizedScore& hyp,
                       double onset_tol_beats, bool octave_invariant) {
  EvalReport report;

  std::vector<NoteSpec> r = ref.notes;
  std::vector<QuantizedNote> h = hyp.notes;
  std::sort(r.begin(), r.end(), [](const NoteSpec& a, const NoteSpec& b) {
    return a.onset_beats < b.onset_beats;
  });
  std::sort(h.begin(), h.end(), [](const QuantizedNote& a, const QuantizedNote& b) {
    return a.onset_beats < b.onset_beats;
  });

  if (r.empty() && h.empty()) {
    report.precision = report.recall = report.f_measure = 1.0;
    return report;
  }

  auto pitch_match = [&](int ref_midi, int hyp_midi) {
    return octave_invariant ? pitch_class_equal(ref_midi, hyp_midi)
                            : ref_midi == hyp_midi;
  };

  // Greedy time-ordered one-to-one matching: each reference note takes the
  // earliest unused in-window hypothesis of matching pitch. Pitch equality
  // partitions the candidates, so this greedy choice is also the maximum
  // matching.
  std::vector<int> ref_match(r.size(), -1);
  std::vector<int> hyp_match(h.size(), -1);
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (hyp_match[j] >= 0) continue;
      const double diff = h[j].onset_beats - r[i].onset_beats;
      if (diff > onset_tol_beats) break;
      if (std::fabs(diff) > onset_tol_beats) continue;
      if (!pitch_match(r[i].midi, h[j].midi)) continue;
      ref_match[i] = static_cast<int>(j);
      hyp_match[j] = static_cast<int>(i);
      ++report.matched;
      if (h[j].midi != r[i].midi) ++report.octave_errors;
      break;
    }
  }

  // Classify leftovers: octave near-misses, unrelated-pitch near-misses,
  // then pitch-exact timing misses within twice the tolerance.
  std::vector<bool> ref_used(r.size(), false);
  for (std::size_t i = 0; i < r.size(); ++i) ref_used[i] = ref_match[i] >= 0;

  auto classify = [&](auto&& predicate, int& counter) {
    for (std::size_t j = 0; j < h.size(); ++j) {
      if (hyp_match[j] >= 0 || hyp_match[j] == -2) continue;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (ref_used[i]) continue;
        if (predicate(r[i], h[j])) {
          ref_used[i] = true;
          hyp_match[j] = -2;  // consumed by a diagnostic class
          ++counter;
          break;
        }
      }
    }
  };

  if (!octave_invariant) {
    classify(
        [&](const NoteSpec& rn, const QuantizedNote& hn) {
          return std::fabs(hn.onset_beats - rn.onset_beats) <= onset_tol_beats &&
                 rn.midi != hn.midi && pitch_class_equal(rn.midi, hn.midi);
        },
        report.octave_errors);
  }
  classify(
      [&](const NoteSpec& rn, const QuantizedNote& hn) {
        return std::fabs(hn.onset_beats - rn.onset_beats) <= onset_tol_beats &&
               !pitch_class_equal(rn.midi, hn.midi);
      },
      report.pitch_errors);
  classify(
      [&](const NoteSpec& rn, const QuantizedNote& hn) {
        const double diff = std::fabs(hn.onset_beats - rn.onset_beats);
        return rn.midi == hn.midi && diff > onset_tol_beats &&
               diff <= 2.0 * onset_tol_beats;
      },
      report.timing_errors);

  report.precision =
      h.empty() ? 0.0 : static_cast<double>(report.matched) / h.size();
  report.recall =
      r.empty() ? 0.0 : static_cast<double>(report.matched) / r.size();
  const double pr = report.precision + report.recall;
  report.f_measure = pr > 0.0 ? 2.0 * report.precision * report.recall / pr : 0.0;
  return report;
}

}  // namespace monomt
