#include "monomt/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>

#include "monomt/error.hpp"
#include "monomt/pitch.hpp"

namespace monomt {

namespace {

constexpr double kInt16Scale = 32768.0;
constexpr double kRampSeconds = 0.010;
constexpr double kNominalPeak = 0.8;

struct ByteReader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  bool remaining(std::size_t n) const { return pos + n <= bytes.size(); }

  std::uint32_t u32() {
    if (!remaining(4)) throw Error(Errc::malformed_riff, "truncated chunk");
    std::uint32_t v = bytes[pos] | (bytes[pos + 1] << 8) |
                      (bytes[pos + 2] << 16) |
                      (static_cast<std::uint32_t>(bytes[pos + 3]) << 24);
    pos += 4;
    return v;
  }

  std::uint16_t u16() {
    if (!remaining(2)) throw Error(Errc::malformed_riff, "truncated chunk");
    std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
    pos += 2;
    return v;
  }

  std::string tag() {
    if (!remaining(4)) throw Error(Errc::malformed_riff, "truncated chunk id");
    std::string t(reinterpret_cast<const char*>(&bytes[pos]), 4);
    pos += 4;
    return t;
  }

  void skip(std::size_t n) {
    if (!remaining(n)) throw Error(Errc::malformed_riff, "chunk size exceeds file");
    pos += n;
  }
};

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::io_failure, "read failed for " + path);
  return bytes;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  ByteReader r{slurp(path)};

  if (r.bytes.size() < 12 || r.tag() != "RIFF")
    throw Error(Errc::malformed_riff, "missing RIFF magic");
  r.u32();  // container size; files in the wild get this wrong, ignore
  if (r.tag() != "WAVE")
    throw Error(Errc::malformed_riff, "missing WAVE form type");

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::vector<std::int16_t> raw;
  bool have_data = false;

  while (r.remaining(8)) {
    const std::string id = r.tag();
    const std::uint32_t size = r.u32();
    if (id == "fmt ") {
      if (size < 16) throw Error(Errc::malformed_riff, "fmt chunk too small");
      const std::size_t chunk_end = r.pos + size;
      const std::uint16_t format = r.u16();
      channels = r.u16();
      sample_rate = r.u32();
      r.u32();  // byte rate
      r.u16();  // block align
      const std::uint16_t bits = r.u16();
      if (format != 1)
        throw Error(Errc::unsupported_encoding,
                    "audio format " + std::to_string(format) + " is not PCM");
      if (bits != 16)
        throw Error(Errc::unsupported_encoding,
                    std::to_string(bits) + "-bit samples unsupported (need 16)");
      if (channels != 1 && channels != 2)
        throw Error(Errc::unsupported_encoding,
                    std::to_string(channels) + " channels unsupported");
      r.skip(chunk_end - r.pos);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw Error(Errc::malformed_riff, "data chunk before fmt");
      if (!r.remaining(size))
        throw Error(Errc::malformed_riff, "data chunk exceeds file size");
      raw.resize(size / 2);
      for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i] = static_cast<std::int16_t>(
            static_cast<std::uint16_t>(r.bytes[r.pos + 2 * i]) |
            (static_cast<std::uint16_t>(r.bytes[r.pos + 2 * i + 1]) << 8));
      }
      r.skip(size);
      have_data = true;
    } else {
      r.skip(size);
    }
    if (size % 2 == 1 && r.remaining(1)) r.skip(1);  // chunk padding
  }

  if (!have_fmt || !have_data)
    throw Error(Errc::malformed_riff, "missing fmt or data chunk");
  if (sample_rate == 0) throw Error(Errc::malformed_riff, "zero sample rate");

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(sample_rate);
  if (channels == 1) {
    buf.samples.reserve(raw.size());
    for (auto v : raw) buf.samples.push_back(v / kInt16Scale);
  } else {
    buf.samples.reserve(raw.size() / 2);
    for (std::size_t i = 0; i + 1 < raw.size(); i += 2)
      buf.samples.push_back((raw[i] + raw[i + 1]) / 2.0 / kInt16Scale);
  }
  if (buf.samples.empty()) throw Error(Errc::empty_audio, "no samples");
  return buf;
}

void write_wav(const AudioBuffer& buf, const std::string& path) {
  if (buf.samples.empty())
    throw Error(Errc::empty_audio, "refusing to write empty buffer");

  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(buf.samples.size() * 2);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits per sample
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : buf.samples) {
    const long v = std::lround(std::clamp(s, -1.0, 1.0) * kInt16Scale);
    const std::int16_t q =
        static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L));
    put_u16(out, static_cast<std::uint16_t>(q));
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_failure, "cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(Errc::io_failure, "write failed for " + path);
}

AudioBuffer synth_melody(const ScoreSpec& score, int sample_rate,
                         const SynthConfig& cfg) {
  validate(score);
  if (sample_rate <= 0)
    throw Error(Errc::invalid_score, "sample rate must be positive");
  if (cfg.timbre == Timbre::harmonic &&
      (cfg.harmonics < 0 || !(cfg.decay > 0.0)))
    throw Error(Errc::invalid_score, "invalid harmonic timbre parameters");

  const double spb = 60.0 / score.tempo_bpm;
  const double body_s = score.total_beats() * spb;
  const double tail_s = score.notes.empty() ? 0.0 : kRampSeconds;
  const auto total = static_cast<std::size_t>(
      std::lround((body_s + tail_s) * sample_rate));

  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.assign(total, 0.0);

  const int partials = cfg.timbre == Timbre::pure_sine ? 1 : cfg.harmonics + 1;
  double norm = 0.0;
  for (int p = 0; p < partials; ++p) norm += std::pow(cfg.decay, p);

  for (const auto& note : score.notes) {
    const double f0 = midi_to_freq(note.midi);
    const double on_s = note.onset_beats * spb;
    const double off_s = on_s + note.duration_beats * spb;
    const double gain = kNominalPeak * note.amplitude / norm;

    const auto first = static_cast<std::size_t>(std::ceil(on_s * sample_rate));
    const auto last = std::min(
        total, static_cast<std::size_t>(
                   std::ceil((off_s + kRampSeconds) * sample_rate)));
    for (std::size_t i = first; i < last; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      const double attack = std::clamp((t - on_s) / kRampSeconds, 0.0, 1.0);
      const double release =
          std::clamp((off_s + kRampSeconds - t) / kRampSeconds, 0.0, 1.0);
      const double phase = 2.0 * std::numbers::pi * f0 * (t - on_s);
      double v = 0.0;
      for (int p = 0; p < partials; ++p)
        v += std::pow(cfg.decay, p) * std::sin(phase * (p + 1));
      buf.samples[i] += gain * attack * release * v;
    }
  }

  for (auto& s : buf.samples) s = std::clamp(s, -1.0, 1.0);
  return buf;
}

namespace {

using nlohmann::json;

json score_json(const ScoreSpec& score) {
  json notes = json::array();
  for (const auto& n : score.notes) {
    json jn = {{"midi", n.midi},
               {"onset", n.onset_beats},
               {"duration", n.duration_beats}};
    if (n.amplitude != 1.0) jn["amp"] = n.amplitude;
    notes.push_back(std::move(jn));
  }
  json j = {{"tempo_bpm", score.tempo_bpm},
            {"time_signature",
             {score.time_signature.numerator, score.time_signature.denominator}},
            {"notes", std::move(notes)}};
  if (score.length_beats > 0.0) j["length_beats"] = score.length_beats;
  return j;
}

}  // namespace

ScoreSpec score_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_score, std::string("bad score JSON: ") + e.what());
  }

  ScoreSpec score;
  try {
    score.tempo_bpm = j.at("tempo_bpm").get<double>();
    const auto& ts = j.at("time_signature");
    if (!ts.is_array() || ts.size() != 2)
      throw Error(Errc::invalid_score, "time_signature must be [num, den]");
    score.time_signature.numerator = ts[0].get<int>();
    score.time_signature.denominator = ts[1].get<int>();
    for (const auto& jn : j.at("notes")) {
      NoteSpec n;
      n.midi = jn.at("midi").get<int>();
      n.onset_beats = jn.at("onset").get<double>();
      n.duration_beats = jn.at("duration").get<double>();
      if (jn.contains("amp")) n.amplitude = jn["amp"].get<double>();
      score.notes.push_back(n);
    }
    if (j.contains("length_beats"))
      score.length_beats = j["length_beats"].get<double>();
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_score, std::string("bad score JSON: ") + e.what());
  }

  validate(score);
  return score;
}

std::string score_to_json(const ScoreSpec& score) {
  return score_json(score).dump(2) + "\n";
}

ScoreSpec load_score(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return score_from_json(text);
}

void save_score(const ScoreSpec& score, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_failure, "cannot open " + path + " for writing");
  out << score_to_json(score);
  if (!out) throw Error(Errc::io_failure, "write failed for " + path);
}

}  // namespace monomt
