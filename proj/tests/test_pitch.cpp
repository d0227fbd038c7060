#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "monomt/error.hpp"
#include "monomt/pitch.hpp"

using namespace monomt;

TEST_CASE("midi_to_freq anchors and range") {
  CHECK(midi_to_freq(69) == 440.0);
  CHECK(midi_to_freq(81) == doctest::Approx(880.0).epsilon(1e-12));
  CHECK(midi_to_freq(0) == doctest::Approx(8.1758).epsilon(1e-3));
  CHECK_THROWS_AS(midi_to_freq(-1), Error);
  CHECK_THROWS_AS(midi_to_freq(128), Error);
}

TEST_CASE("pitch table is strictly increasing with exact A4") {
  const PitchTable table;
  CHECK(table.freq(69) == 440.0);
  for (int m = 1; m < 128; ++m) CHECK(table.freq(m) > table.freq(m - 1));
}

TEST_CASE("dichotomy_minimize finds known minima") {
  const auto quad = dichotomy_minimize(
      [](double x) { return (x - 3.0) * (x - 3.0); }, {0.0, 10.0, 1e-6, 64});
  CHECK(std::fabs(quad.x - 3.0) <= 1e-5);

  const auto vee = dichotomy_minimize([](double x) { return std::fabs(x); },
                                      {-1.0, 1.0, 1e-6, 64});
  CHECK(std::fabs(vee.x) <= 1e-5);
}

TEST_CASE("dichotomy_minimize rejects malformed specs") {
  auto f = [](double x) { return x * x; };
  CHECK_THROWS_AS(dichotomy_minimize(f, {1.0, 0.0, 1e-6, 64}), Error);
  CHECK_THROWS_AS(dichotomy_minimize(f, {0.0, 1.0, 0.0, 64}), Error);
  CHECK_THROWS_AS(dichotomy_minimize(f, {0.0, 1.0, 0.6, 64}), Error);
  CHECK_THROWS_AS(dichotomy_minimize(f, {0.0, 1.0, 1e-6, 0}), Error);
}

TEST_CASE("dichotomy iterates satisfy the halving error bound") {
  std::mt19937 rng(8001);
  std::uniform_real_distribution<double> lo(-50.0, 50.0);
  std::uniform_real_distribution<double> width(0.5, 20.0);
  std::uniform_real_distribution<double> curvature(0.1, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int trial = 0; trial < 100; ++trial) {
    const double a = lo(rng);
    const double b = a + width(rng);
    const double x_star = a + unit(rng) * (b - a);
    const double c = curvature(rng);
    const double eps = 1e-6;
    auto f = [=](double x) { return c * (x - x_star) * (x - x_star); };

    std::vector<std::pair<int, double>> midpoints;
    dichotomy_minimize(f, {a, b, eps, 60}, [&](int n, double mid) {
      midpoints.emplace_back(n, mid);
    });
    REQUIRE(!midpoints.empty());
    for (const auto& [n, mid] : midpoints) {
      const double bound = (b - a - eps) / std::exp2(n) + eps / 2.0;
      CHECK(std::fabs(mid - x_star) <= bound + 1e-12);
    }
  }
}

TEST_CASE("snap_frequency on table entries and boundaries") {
  const PitchTable table;

  const auto exact = snap_frequency(440.0, table);
  CHECK(exact.midi == 69);
  CHECK(exact.iterations <= 8);

  // The log midpoint between MIDI 69 and 70 sits at ~452.89 Hz.
  CHECK(snap_frequency(452.0, table).midi == 69);
  CHECK(snap_frequency(453.5, table).midi == 70);

  CHECK(snap_frequency(1.0, table).midi == 0);
  CHECK(snap_frequency(20000.0, table).midi == 127);
  CHECK_THROWS_AS(snap_frequency(0.0, table), Error);
  CHECK_THROWS_AS(snap_frequency(-5.0, table), Error);
}

TEST_CASE("snap_frequency equals the linear-scan oracle") {
  const PitchTable table;
  std::mt19937 rng(8002);
  std::uniform_real_distribution<double> log_f(std::log(8.0), std::log(12544.0));
  for (int i = 0; i < 10000; ++i) {
    const double f = std::exp(log_f(rng));
    const auto snap = snap_frequency(f, table);
    CHECK(snap.midi == test::linear_scan_snap(f));
    CHECK(snap.iterations <= 8);
  }
}

TEST_CASE("snap_frequency round trip over the full table") {
  const PitchTable table;
  for (int m = 0; m < 128; ++m)
    CHECK(snap_frequency(midi_to_freq(m), table).midi == m);
}

TEST_CASE("snap_frequency tolerates +-49 cent detuning") {
  const PitchTable table;
  for (int m = 0; m < 128; ++m) {
    for (int cents : {-49, -25, 25, 49}) {
      const double f = midi_to_freq(m) * std::exp2(cents / 1200.0);
      CHECK(snap_frequency(f, table).midi == m);
    }
  }
}

TEST_CASE("continuous dichotomy snap agrees with the search variant") {
  const PitchTable table;
  std::mt19937 rng(8003);
  std::uniform_real_distribution<double> log_f(std::log(8.5), std::log(12000.0));
  for (int i = 0; i < 2000; ++i) {
    const double f = std::exp(log_f(rng));
    CHECK(snap_frequency_continuous(f) == snap_frequency(f, table).midi);
  }
}

TEST_CASE("build_pitch_track on a one-second A4 sine") {
  const auto buf = test::make_sine(440.0, 1.0, 44100);
  const auto track = build_pitch_track(buf, 4096, 1024);
  CHECK(track.frames.size() == 40);  // floor((44100-4096)/1024)+1
  for (const auto& frame : track.frames) {
    REQUIRE(frame.voiced());
    CHECK(*frame.midi == 69);
    CHECK(frame.snap_iterations <= 8);
    CHECK(frame.energy > 0.1);
  }
  for (std::size_t i = 1; i < track.frames.size(); ++i)
    CHECK(track.frames[i].time_s - track.frames[i - 1].time_s ==
          doctest::Approx(1024.0 / 44100.0));
}

TEST_CASE("build_pitch_track on silence is unvoiced") {
  const auto buf = test::make_silence(1.0, 44100);
  const auto track = build_pitch_track(buf, 4096, 1024);
  for (const auto& frame : track.frames) CHECK(!frame.voiced());
}

TEST_CASE("build_pitch_track rejects short buffers") {
  const auto buf = test::make_sine(440.0, 0.05, 44100);
  CHECK_THROWS_AS(build_pitch_track(buf, 4096, 1024), Error);
  try {
    build_pitch_track(buf, 4096, 1024);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::buffer_too_short);
  }
}
