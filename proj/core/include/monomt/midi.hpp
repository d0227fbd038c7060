#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "monomt/types.hpp"

namespace monomt {

/// Appends the variable-length-quantity encoding of `value` (< 2^28).
void write_vlq(std::vector<std::uint8_t>& out, std::uint32_t value);

/// Decodes a VLQ starting at `pos`; advances `pos` past it.
/// Throws MalformedSmf on truncation or overlong encodings.
std::uint32_t read_vlq(std::span<const std::uint8_t> data, std::size_t& pos);

/// Format-0 Standard MIDI File bytes for a quantized score: set-tempo and
/// time-signature metas, a program change, then note-on/note-off pairs on
/// channel 0 with velocity 90. Ticks are beats x ppq.
std::vector<std::uint8_t> encode_midi(const QuantizedScore& score,
                                      int ppq = 480, int program = 0);

struct MidiReadStats {
  int skipped_events = 0;  // events ignored while decoding
};

/// Inverse of encode_midi over the supported subset (format 0, single
/// track, one channel). Unknown events are skipped and counted.
/// Throws MalformedSmf, UnsupportedFeature.
QuantizedScore decode_midi(std::span<const std::uint8_t> data,
                           MidiReadStats* stats = nullptr);

void write_midi(const QuantizedScore& score, const std::string& path,
                int ppq = 480, int program = 0);
QuantizedScore read_midi(const std::string& path,
                         MidiReadStats* stats = nullptr);

}  // namespace monomt
