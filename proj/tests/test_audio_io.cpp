#include <cstdint>
#include <fstream>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "monomt/audio_io.hpp"
#include "monomt/error.hpp"
#include "monomt/pitch.hpp"

using namespace monomt;
using test::temp_path;

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}
void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
}
void put_tag(std::vector<std::uint8_t>& out, const char* t) {
  out.insert(out.end(), t, t + 4);
}

// Hand-rolled writer so the reader is tested against independent bytes.
std::vector<std::uint8_t> raw_wav(std::uint16_t channels, std::uint32_t rate,
                                  std::uint16_t bits, std::uint16_t format,
                                  const std::vector<std::int16_t>& data) {
  std::vector<std::uint8_t> out;
  put_tag(out, "RIFF");
  put_u32(out, 36 + static_cast<std::uint32_t>(data.size() * 2));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * channels * bits / 8);
  put_u16(out, channels * bits / 8);
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data.size() * 2));
  for (auto v : data) put_u16(out, static_cast<std::uint16_t>(v));
  return out;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("read_wav scales int16 mono by 1/32768") {
  const auto path = temp_path("mono4.wav");
  write_bytes(path, raw_wav(1, 44100, 16, 1, {0, 16384, -16384, 32767}));
  const auto buf = read_wav(path);
  CHECK(buf.sample_rate == 44100);
  REQUIRE(buf.samples.size() == 4);
  CHECK(buf.samples[0] == doctest::Approx(0.0));
  CHECK(buf.samples[1] == doctest::Approx(0.5));
  CHECK(buf.samples[2] == doctest::Approx(-0.5));
  CHECK(buf.samples[3] == doctest::Approx(32767.0 / 32768.0));
}

TEST_CASE("read_wav downmixes stereo by channel average") {
  const auto path = temp_path("stereo.wav");
  // L and R mirror each other, so the average cancels to zero.
  write_bytes(path, raw_wav(2, 8000, 16, 1,
                            {1000, -1000, -2000, 2000, 16000, -16000}));
  const auto buf = read_wav(path);
  REQUIRE(buf.samples.size() == 3);
  for (double s : buf.samples) CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("read_wav error cases") {
  const auto rifx = temp_path("rifx.wav");
  auto bytes = raw_wav(1, 44100, 16, 1, {0, 0});
  bytes[3] = 'X';  // RIFF -> RIFX
  write_bytes(rifx, bytes);
  CHECK_THROWS_AS(read_wav(rifx), Error);
  try {
    read_wav(rifx);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_riff);
  }

  const auto nonpcm = temp_path("float.wav");
  write_bytes(nonpcm, raw_wav(1, 44100, 16, 3, {0, 0}));
  try {
    read_wav(nonpcm);
    FAIL("expected UnsupportedEncoding");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_encoding);
  }

  const auto empty = temp_path("empty.wav");
  write_bytes(empty, raw_wav(1, 44100, 16, 1, {}));
  try {
    read_wav(empty);
    FAIL("expected EmptyAudio");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_audio);
  }
}

TEST_CASE("write_wav emits the stated data-chunk size") {
  AudioBuffer buf;
  buf.sample_rate = 44100;
  buf.samples.assign(44100, 0.25);
  const auto path = temp_path("sized.wav");
  write_wav(buf, path);

  std::ifstream f(path, std::ios::binary);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  REQUIRE(bytes.size() == 44 + 88200);
  const std::uint32_t data_size = bytes[40] | (bytes[41] << 8) |
                                  (bytes[42] << 16) |
                                  (static_cast<std::uint32_t>(bytes[43]) << 24);
  CHECK(data_size == 88200);
}

TEST_CASE("wav round trip stays within one quantization step") {
  AudioBuffer one;
  one.sample_rate = 8000;
  one.samples = {0.0};
  const auto p1 = temp_path("one.wav");
  write_wav(one, p1);
  const auto r1 = read_wav(p1);
  CHECK(r1.sample_rate == 8000);
  CHECK(std::fabs(r1.samples.at(0)) <= 1.0 / 32768.0);

  std::mt19937 rng(9001);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> len(1, 2048);
  const auto path = temp_path("roundtrip.wav");
  double max_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    AudioBuffer buf;
    buf.sample_rate = 44100;
    buf.samples.resize(static_cast<std::size_t>(len(rng)));
    for (auto& s : buf.samples) s = amp(rng);
    write_wav(buf, path);
    const auto back = read_wav(path);
    REQUIRE(back.samples.size() == buf.samples.size());
    REQUIRE(back.sample_rate == buf.sample_rate);
    for (std::size_t i = 0; i < buf.samples.size(); ++i)
      max_err = std::max(max_err, std::fabs(back.samples[i] - buf.samples[i]));
  }
  CHECK(max_err <= 1.0 / 32768.0);
}

TEST_CASE("synth_melody renders a half-second A4 at 120 BPM") {
  const auto score = test::make_score(120.0, {4, 4}, {{69, 0.0, 1.0}});
  const auto buf = synth_melody(score, 44100);
  // One beat at 120 BPM is 0.5 s, plus the 10 ms release tail.
  CHECK(buf.samples.size() == std::size_t(std::lround(0.51 * 44100)));

  double acc = 0.0;
  for (std::size_t i = 0; i < 22050; ++i) acc += buf.samples[i] * buf.samples[i];
  CHECK(std::sqrt(acc / 22050.0) > 0.1);

  const auto peak = test::dft_peak_hz(
      std::span<const double>(buf.samples).subspan(500, 16384), 44100, 400.0,
      480.0);
  CHECK(std::fabs(peak - 440.0) < 1.0);
}

TEST_CASE("synth_melody renders rests as silence") {
  ScoreSpec score = test::make_score(120.0, {4, 4}, {});
  score.length_beats = 4.0;
  const auto buf = synth_melody(score, 44100);
  CHECK(buf.samples.size() == 88200);  // 2 s at 120 BPM
  for (double s : buf.samples) CHECK(s == 0.0);
}

TEST_CASE("synth_melody C4 peak sits at the C4 frequency") {
  const auto score = test::make_score(120.0, {4, 4}, {{60, 0.0, 1.0}});
  const auto buf = synth_melody(score, 44100);
  const auto peak = test::dft_peak_hz(
      std::span<const double>(buf.samples).first(22050), 44100, 240.0, 290.0);
  CHECK(std::fabs(peak - 261.63) <= 1.0);
}

TEST_CASE("synthesis oracle contract: DFT peak snaps back to the pitch") {
  std::mt19937 rng(9002);
  const PitchTable table;
  auto score = test::random_melody(rng, 6, 100.0, {4, 4}, 50, 80);
  for (const auto timbre : {Timbre::pure_sine, Timbre::harmonic}) {
    const auto buf = synth_melody(score, 44100, {timbre, 3, 0.5});
    const double spb = 60.0 / score.tempo_bpm;
    for (const auto& note : score.notes) {
      const auto start = static_cast<std::size_t>(
          std::lround((note.onset_beats * spb + 0.02) * 44100));
      const double f0 = midi_to_freq(note.midi);
      const auto window =
          std::span<const double>(buf.samples).subspan(start, 8192);
      const double peak =
          test::dft_peak_hz(window, 44100, f0 * 0.9, f0 * 1.1, 0.5);
      CHECK(snap_frequency(peak, table).midi == note.midi);
    }
  }
}

TEST_CASE("synth_melody rejects invalid scores") {
  auto overlap = test::make_score(120.0, {4, 4}, {{60, 0.0, 2.0}, {62, 1.0, 1.0}});
  CHECK_THROWS_AS(synth_melody(overlap, 44100), Error);

  auto bad_pitch = test::make_score(120.0, {4, 4}, {{200, 0.0, 1.0}});
  CHECK_THROWS_AS(synth_melody(bad_pitch, 44100), Error);

  auto bad_tempo = test::make_score(0.0, {4, 4}, {});
  CHECK_THROWS_AS(synth_melody(bad_tempo, 44100), Error);
}

TEST_CASE("score JSON round trip and validation") {
  auto score = test::make_score(96.5, {3, 4}, {{60, 0.0, 1.0}, {64, 1.5, 0.5}});
  score.notes[1].amplitude = 0.9;
  const auto text = score_to_json(score);
  const auto back = score_from_json(text);
  CHECK(back == score);

  CHECK_THROWS_AS(score_from_json("{not json"), Error);
  CHECK_THROWS_AS(score_from_json("{\"tempo_bpm\": 120}"), Error);
  CHECK_THROWS_AS(
      score_from_json(R"({"tempo_bpm":120,"time_signature":[4,4],
        "notes":[{"midi":128,"onset":0,"duration":1}]})"),
      Error);
  CHECK_THROWS_AS(
      score_from_json(R"({"tempo_bpm":120,"time_signature":[4,3],"notes":[]})"),
      Error);
}
