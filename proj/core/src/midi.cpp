#include "monomt/midi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "monomt/error.hpp"

namespace monomt {

namespace {

constexpr std::uint8_t kVelocity = 90;

void put_u16be(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

struct BeReader {
  std::span<const std::uint8_t> data;
  std::size_t pos = 0;

  void require(std::size_t n) const {
    if (pos + n > data.size())
      throw Error(Errc::malformed_smf, "truncated file");
  }
  std::uint8_t u8() {
    require(1);
    return data[pos++];
  }
  std::uint16_t u16() {
    require(2);
    std::uint16_t v = static_cast<std::uint16_t>((data[pos] << 8) | data[pos + 1]);
    pos += 2;
    return v;
  }
  std::uint32_t u32() {
    require(4);
    std::uint32_t v = (static_cast<std::uint32_t>(data[pos]) << 24) |
                      (static_cast<std::uint32_t>(data[pos + 1]) << 16) |
                      (static_cast<std::uint32_t>(data[pos + 2]) << 8) |
                      data[pos + 3];
    pos += 4;
    return v;
  }
  bool tag(const char* t) {
    require(4);
    const bool ok = std::equal(t, t + 4, data.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += 4;
    return ok;
  }
  void skip(std::size_t n) {
    require(n);
    pos += n;
  }
};

int log2_exact(int v) {
  int b = 0;
  while ((1 << b) < v) ++b;
  return (1 << b) == v ? b : -1;
}

}  // namespace

void write_vlq(std::vector<std::uint8_t>& out, std::uint32_t value) {
  std::uint8_t stack[5];
  int n = 0;
  do {
    stack[n++] = static_cast<std::uint8_t>(value & 0x7F);
    value >>= 7;
  } while (value != 0);
  while (n > 1) out.push_back(static_cast<std::uint8_t>(stack[--n] | 0x80));
  out.push_back(stack[0]);
}

std::uint32_t read_vlq(std::span<const std::uint8_t> data, std::size_t& pos) {
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i) {
    if (pos >= data.size())
      throw Error(Errc::malformed_smf, "truncated variable-length quantity");
    const std::uint8_t byte = data[pos++];
    value = (value << 7) | (byte & 0x7F);
    if (!(byte & 0x80)) return value;
  }
  throw Error(Errc::malformed_smf, "variable-length quantity over 4 bytes");
}

std::vector<std::uint8_t> encode_midi(const QuantizedScore& score, int ppq,
                                      int program) {
  if (ppq < 1 || ppq > 0x7FFF)
    throw Error(Errc::out_of_range, "ppq outside 1..32767");
  if (program < 0 || program > 127)
    throw Error(Errc::out_of_range, "program outside 0..127");
  const int den_pow = log2_exact(score.time_signature.denominator);
  if (score.time_signature.numerator < 1 ||
      score.time_signature.numerator > 255 || den_pow < 0)
    throw Error(Errc::out_of_range, "unencodable time signature");

  struct Event {
    std::uint32_t tick;
    int order;  // metas, then note-offs, then note-ons at equal ticks
    std::vector<std::uint8_t> bytes;
  };
  std::vector<Event> events;

  const auto tempo_us =
      static_cast<std::uint32_t>(std::llround(60e6 / score.tempo_bpm));
  events.push_back({0, 0,
                    {0xFF, 0x51, 0x03,
                     static_cast<std::uint8_t>((tempo_us >> 16) & 0xFF),
                     static_cast<std::uint8_t>((tempo_us >> 8) & 0xFF),
                     static_cast<std::uint8_t>(tempo_us & 0xFF)}});
  events.push_back({0, 1,
                    {0xFF, 0x58, 0x04,
                     static_cast<std::uint8_t>(score.time_signature.numerator),
                     static_cast<std::uint8_t>(den_pow), 24, 8}});
  events.push_back({0, 2, {0xC0, static_cast<std::uint8_t>(program)}});

  std::uint32_t last_tick = 0;
  for (const auto& n : score.notes) {
    if (n.midi < 0 || n.midi > 127)
      throw Error(Errc::out_of_range, "midi pitch outside 0..127");
    const auto on = static_cast<std::uint32_t>(std::llround(n.onset_beats * ppq));
    const auto off = static_cast<std::uint32_t>(
        std::llround((n.onset_beats + n.duration_beats) * ppq));
    events.push_back({on, 4, {0x90, static_cast<std::uint8_t>(n.midi), kVelocity}});
    events.push_back({off, 3, {0x80, static_cast<std::uint8_t>(n.midi), 0x00}});
    last_tick = std::max(last_tick, off);
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) {
                     return a.tick != b.tick ? a.tick < b.tick
                                             : a.order < b.order;
                   });
  events.push_back({last_tick, 5, {0xFF, 0x2F, 0x00}});

  std::vector<std::uint8_t> track;
  std::uint32_t tick = 0;
  for (const auto& ev : events) {
    write_vlq(track, ev.tick - tick);
    track.insert(track.end(), ev.bytes.begin(), ev.bytes.end());
    tick = ev.tick;
  }

  std::vector<std::uint8_t> out;
  out.reserve(14 + 8 + track.size());
  out.insert(out.end(), {'M', 'T', 'h', 'd'});
  put_u32be(out, 6);
  put_u16be(out, 0);  // format 0
  put_u16be(out, 1);  // one track
  put_u16be(out, static_cast<std::uint16_t>(ppq));
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  put_u32be(out, static_cast<std::uint32_t>(track.size()));
  out.insert(out.end(), track.begin(), track.end());
  return out;
}

QuantizedScore decode_midi(std::span<const std::uint8_t> data,
                           MidiReadStats* stats) {
  BeReader r{data};
  if (!r.tag("MThd")) throw Error(Errc::malformed_smf, "missing MThd magic");
  if (r.u32() != 6) throw Error(Errc::malformed_smf, "bad MThd length");
  const std::uint16_t format = r.u16();
  if (format != 0)
    throw Error(Errc::unsupported_feature,
                "format " + std::to_string(format) + " (only format 0)");
  const std::uint16_t ntrks = r.u16();
  if (ntrks != 1)
    throw Error(Errc::unsupported_feature,
                std::to_string(ntrks) + " tracks (only single-track)");
  const std::uint16_t division = r.u16();
  if (division & 0x8000)
    throw Error(Errc::unsupported_feature, "SMPTE time division");
  if (division == 0) throw Error(Errc::malformed_smf, "zero time division");

  if (!r.tag("MTrk")) throw Error(Errc::malformed_smf, "missing MTrk magic");
  const std::uint32_t track_len = r.u32();
  r.require(track_len);
  const std::size_t track_end = r.pos + track_len;

  MidiReadStats local;
  double tempo_bpm = 120.0;
  bool saw_tempo = false;
  TimeSignature ts{4, 4};
  std::vector<QuantizedNote> notes;
  std::map<int, std::uint32_t> pending;  // pitch -> note-on tick

  std::uint32_t tick = 0;
  std::uint8_t running = 0;
  bool ended = false;

  while (!ended) {
    if (r.pos >= track_end)
      throw Error(Errc::malformed_smf, "track ended without end-of-track");
    tick += read_vlq(data, r.pos);

    std::uint8_t status = data[r.pos];
    if (status & 0x80) {
      ++r.pos;
      if (status < 0xF0) running = status;
    } else {
      if (!(running & 0x80))
        throw Error(Errc::malformed_smf, "data byte without running status");
      status = running;
    }

    if (status == 0xFF) {
      const std::uint8_t type = r.u8();
      const std::uint32_t len = read_vlq(data, r.pos);
      r.require(len);
      if (type == 0x2F) {
        ended = true;
      } else if (type == 0x51 && len == 3) {
        const std::uint32_t us = (static_cast<std::uint32_t>(data[r.pos]) << 16) |
                                 (static_cast<std::uint32_t>(data[r.pos + 1]) << 8) |
                                 data[r.pos + 2];
        if (us == 0) throw Error(Errc::malformed_smf, "zero tempo");
        if (!saw_tempo) {
          tempo_bpm = 60e6 / us;
          saw_tempo = true;
        }
      } else if (type == 0x58 && len >= 2) {
        ts.numerator = data[r.pos];
        ts.denominator = 1 << data[r.pos + 1];
      } else {
        ++local.skipped_events;
      }
      r.skip(len);
    } else if (status == 0xF0 || status == 0xF7) {
      const std::uint32_t len = read_vlq(data, r.pos);
      r.skip(len);
      ++local.skipped_events;
    } else {
      const std::uint8_t kind = status & 0xF0;
      const std::uint8_t channel = status & 0x0F;
      if (channel != 0)
        throw Error(Errc::unsupported_feature,
                    "channel " + std::to_string(channel) + " (only channel 0)");
      switch (kind) {
        case 0x80:
        case 0x90: {
          const std::uint8_t pitch = r.u8();
          const std::uint8_t vel = r.u8();
          if (kind == 0x90 && vel != 0) {
            if (pending.count(pitch))
              throw Error(Errc::malformed_smf, "overlapping note-on");
            pending[pitch] = tick;
          } else {  // note-off, or note-on with velocity 0
            const auto it = pending.find(pitch);
            if (it == pending.end())
              throw Error(Errc::malformed_smf, "note-off without note-on");
            if (tick == it->second)
              throw Error(Errc::malformed_smf, "zero-length note");
            QuantizedNote n;
            n.midi = pitch;
            n.onset_beats = static_cast<double>(it->second) / division;
            n.duration_beats =
                static_cast<double>(tick - it->second) / division;
            notes.push_back(n);
            pending.erase(it);
          }
          break;
        }
        case 0xC0:
          r.u8();  // program change; timbre is not part of the score
          break;
        case 0xD0:
          r.u8();
          ++local.skipped_events;
          break;
        case 0xA0:
        case 0xB0:
        case 0xE0:
          r.u8();
          r.u8();
          ++local.skipped_events;
          break;
        default:
          throw Error(Errc::malformed_smf, "unknown status byte");
      }
    }
  }

  if (!pending.empty())
    throw Error(Errc::malformed_smf, "note-on without note-off");

  std::sort(notes.begin(), notes.end(),
            [](const QuantizedNote& a, const QuantizedNote& b) {
              return a.onset_beats < b.onset_beats;
            });

  QuantizedScore score;
  score.tempo_bpm = tempo_bpm;
  score.time_signature = ts;
  score.notes = std::move(notes);
  score.bar_count = std::max(
      1, static_cast<int>(
             std::ceil(score.total_beats() / ts.numerator - 1e-9)));
  if (stats) *stats = local;
  return score;
}

void write_midi(const QuantizedScore& score, const std::string& path, int ppq,
                int program) {
  const auto bytes = encode_midi(score, ppq, program);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_failure, "cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(Errc::io_failure, "write failed for " + path);
}

QuantizedScore read_midi(const std::string& path, MidiReadStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_midi(bytes, stats);
}

}  // namespace monomt
