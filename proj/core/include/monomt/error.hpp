#pragma once

#include <stdexcept>
#include <string>

namespace monomt {

/// Failure classes raised across the toolkit. Names are stable and appear
/// verbatim in CLI diagnostics.
enum class Errc {
  // audio_io
  malformed_riff,
  unsupported_encoding,
  empty_audio,
  io_failure,
  invalid_score,
  // preprocess
  all_silent,
  all_zero,
  // spectral
  non_power_of_two,
  // pitch
  out_of_range,
  invalid_interval,
  non_positive_frequency,
  buffer_too_short,
  // segmentation
  empty_track,
  // rhythm
  no_onsets,
  insufficient_onsets,
  too_short,
  // midi
  malformed_smf,
  unsupported_feature,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  const char* name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

/// An Error annotated with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.code(), cause.what()), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace monomt
