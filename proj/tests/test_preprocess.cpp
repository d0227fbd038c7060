#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "monomt/error.hpp"
#include "monomt/preprocess.hpp"

using namespace monomt;
using test::concat;
using test::make_silence;
using test::make_sine;

TEST_CASE("trim_silence cuts leading and trailing silence") {
  const auto buf = concat(concat(make_silence(1.0, 44100), make_sine(440.0, 1.0, 44100)),
                          make_silence(1.0, 44100));
  const auto out = trim_silence(buf);
  CHECK(out.duration_seconds() >= 1.0 - 1e-9);
  CHECK(out.duration_seconds() <= 1.0 + 2 * 0.020 + 1e-9);
}

TEST_CASE("trim_silence is the identity without silence") {
  const auto buf = make_sine(440.0, 0.5, 44100);
  CHECK(trim_silence(buf) == buf);
}

TEST_CASE("trim_silence rejects all-silent input") {
  const auto buf = make_silence(0.5, 44100);
  try {
    trim_silence(buf);
    FAIL("expected AllSilent");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::all_silent);
  }
}

TEST_CASE("trim_silence is idempotent") {
  std::mt19937 rng(10001);
  std::uniform_real_distribution<double> lead(0.0, 0.4);
  std::uniform_real_distribution<double> freq(200.0, 800.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto buf =
        concat(concat(make_silence(lead(rng), 8000), make_sine(freq(rng), 0.3, 8000)),
               make_silence(lead(rng), 8000));
    const auto once = trim_silence(buf);
    CHECK(trim_silence(once) == once);
  }
}

TEST_CASE("noise_gate zeroes quiet windows and keeps loud ones") {
  auto buf = concat(concat(make_sine(440.0, 0.3, 44100, 0.5),
                           make_silence(0.3, 44100)),
                    make_sine(440.0, 0.3, 44100, 0.5));
  // Low-level noise in the silent middle third.
  std::mt19937 rng(10002);
  std::uniform_real_distribution<double> noise(-0.005, 0.005);
  const std::size_t third = buf.samples.size() / 3;
  for (std::size_t i = third; i < 2 * third; ++i) buf.samples[i] = noise(rng);

  const auto out = noise_gate(buf);
  REQUIRE(out.samples.size() == buf.samples.size());
  for (std::size_t i = third + 882; i + 882 < 2 * third; ++i)
    CHECK(out.samples[i] == 0.0);
}

TEST_CASE("noise_gate passes a clean full-scale sine unchanged") {
  const auto buf = make_sine(440.0, 0.25, 44100, 0.9);
  CHECK(noise_gate(buf) == buf);
}

TEST_CASE("noise_gate silences a buffer below the floor") {
  const auto buf = make_sine(440.0, 0.25, 44100, 0.001);
  const auto out = noise_gate(buf);
  for (double s : out.samples) CHECK(s == 0.0);
}

TEST_CASE("noise_gate never increases a sample magnitude") {
  std::mt19937 rng(10003);
  std::uniform_real_distribution<double> amp(-0.3, 0.3);
  AudioBuffer buf;
  buf.sample_rate = 8000;
  buf.samples.resize(4000);
  for (auto& s : buf.samples) s = amp(rng);
  const auto out = noise_gate(buf);
  for (std::size_t i = 0; i < buf.samples.size(); ++i)
    CHECK(std::fabs(out.samples[i]) <= std::fabs(buf.samples[i]));
}

TEST_CASE("normalize scales the peak to one") {
  AudioBuffer buf;
  buf.sample_rate = 8000;
  buf.samples = {0.25, -0.5};
  const auto out = normalize(buf);
  CHECK(out.samples[0] == doctest::Approx(0.5));
  CHECK(out.samples[1] == doctest::Approx(-1.0));

  AudioBuffer peaked;
  peaked.sample_rate = 8000;
  peaked.samples = {0.5, -1.0, 0.25};
  CHECK(normalize(peaked) == peaked);

  AudioBuffer zeros;
  zeros.sample_rate = 8000;
  zeros.samples = {0.0, 0.0, 0.0};
  try {
    normalize(zeros);
    FAIL("expected AllZero");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::all_zero);
  }
}

TEST_CASE("normalize is idempotent and keeps the argmax") {
  std::mt19937 rng(10004);
  std::uniform_real_distribution<double> amp(-0.7, 0.7);
  for (int trial = 0; trial < 20; ++trial) {
    AudioBuffer buf;
    buf.sample_rate = 8000;
    buf.samples.resize(500);
    for (auto& s : buf.samples) s = amp(rng);

    const auto once = normalize(buf);
    const auto twice = normalize(once);
    for (std::size_t i = 0; i < once.samples.size(); ++i)
      CHECK(twice.samples[i] == doctest::Approx(once.samples[i]).epsilon(1e-12));

    auto argmax = [](const AudioBuffer& b) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < b.samples.size(); ++i)
        if (std::fabs(b.samples[i]) > std::fabs(b.samples[best])) best = i;
      return best;
    };
    CHECK(argmax(buf) == argmax(once));
  }
}
