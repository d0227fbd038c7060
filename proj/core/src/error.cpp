#include "monomt/error.hpp"

namespace monomt {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_riff: return "MalformedRiff";
    case Errc::unsupported_encoding: return "UnsupportedEncoding";
    case Errc::empty_audio: return "EmptyAudio";
    case Errc::io_failure: return "IoFailure";
    case Errc::invalid_score: return "InvalidScore";
    case Errc::all_silent: return "AllSilent";
    case Errc::all_zero: return "AllZero";
    case Errc::non_power_of_two: return "NonPowerOfTwo";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::invalid_interval: return "InvalidInterval";
    case Errc::non_positive_frequency: return "NonPositiveFrequency";
    case Errc::buffer_too_short: return "BufferTooShort";
    case Errc::empty_track: return "EmptyTrack";
    case Errc::no_onsets: return "NoOnsets";
    case Errc::insufficient_onsets: return "InsufficientOnsets";
    case Errc::too_short: return "TooShort";
    case Errc::malformed_smf: return "MalformedSmf";
    case Errc::unsupported_feature: return "UnsupportedFeature";
  }
  return "Unknown";
}

}  // namespace monomt
