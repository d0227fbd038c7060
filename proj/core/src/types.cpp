#include "monomt/types.hpp"

#include <string>

#include "monomt/error.hpp"

namespace monomt {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

void validate(const ScoreSpec& score) {
  auto fail = [](const std::string& msg) {
    throw Error(Errc::invalid_score, msg);
  };

  if (!(score.tempo_bpm > 0.0)) fail("tempo_bpm must be positive");
  if (score.time_signature.numerator < 1)
    fail("time signature numerator must be positive");
  if (!power_of_two(score.time_signature.denominator))
    fail("time signature denominator must be a power of two");
  if (score.length_beats < 0.0) fail("length_beats must be non-negative");

  double prev_end = 0.0;
  bool first = true;
  for (const auto& n : score.notes) {
    if (n.midi < 0 || n.midi > 127)
      fail("midi pitch " + std::to_string(n.midi) + " outside 0..127");
    if (n.onset_beats < 0.0) fail("note onset must be non-negative");
    if (!(n.duration_beats > 0.0)) fail("note duration must be positive");
    if (!(n.amplitude > 0.0)) fail("note amplitude must be positive");
    if (!first && n.onset_beats < prev_end - 1e-9)
      fail("notes overlap or are out of order (monophonic score required)");
    prev_end = n.onset_beats + n.duration_beats;
    first = false;
  }
}

}  // namespace monomt
