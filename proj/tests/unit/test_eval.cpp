// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>
#include <string>

#include "common/error.hpp"
#include "doctest.h"
#include "eval/benchmark.hpp"
#include "eval/synth.hpp"
#include "pitch/mel.hpp"

using namespace phonic;
using namespace phonic::eval;

namespace {

SignalSpec constant_sine(double hz, double seconds) {
  SignalSpec s;
  s.name = "sine";
  s.f0_contour = {{0.0, hz}};
  s.duration_s = seconds;
  return s;
}

pitch::PitchTrack track_of(const Truth& values) {
  pitch::PitchTrack t;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double ts = static_cast<double>(i) * 10.0;
    t.estimates.push_back(values[i] ? pitch::PitchEstimate::voiced_at(ts, *values[i], 1.0)
                                    : pitch::PitchEstimate::unvoiced(ts));
  }
  return t;
}

}  // namespace

TEST_CASE("constant sine truth and frame count") {
  const auto syn = synthesize(constant_sine(200.0, 1.0));
  CHECK(syn.frames.size() == syn.truth.size());
  for (const auto& t : syn.truth) {
    REQUIRE(t.has_value());
    CHECK(*t == 200.0);
  }
  CHECK(synthesize(constant_sine(200.0, 0.5)).frames.size() == 40);
}

TEST_CASE("synthesis is deterministic given the seed") {
  SignalSpec s = constant_sine(180.0, 0.4);
  s.waveform = Waveform::sawtooth;
  s.jitter_pct = 3.0;
  s.shimmer_pct = 8.0;
  s.noise_snr_db = 15.0;
  s.seed = 42;
  const auto a = synthesize(s);
  const auto b = synthesize(s);
  CHECK(a.signal == b.signal);
  s.seed = 43;
  CHECK(synthesize(s).signal != a.signal);
}

TEST_CASE("silent contour segments are labeled unvoiced") {
  SignalSpec s;
  s.f0_contour = {{0.0, 200.0}, {0.5, 200.0}, {0.5001, std::nullopt}, {1.0, std::nullopt}};
  s.duration_s = 1.0;
  const auto syn = synthesize(s);
  CHECK(syn.truth.front().has_value());
  CHECK_FALSE(syn.truth.back().has_value());
}

TEST_CASE("invalid signal specs are rejected") {
  SignalSpec s = constant_sine(30000.0, 1.0);
  try {
    synthesize(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
  s = constant_sine(200.0, 0.0);
  CHECK_THROWS_AS(synthesize(s), Error);
  s = constant_sine(200.0, 1.0);
  s.jitter_pct = 25.0;
  CHECK_THROWS_AS(synthesize(s), Error);
}

TEST_CASE("score of a perfect estimator is zero") {
  const Truth truth{100.0, 200.0, std::nullopt, 300.0};
  const auto r = score(track_of(truth), truth);
  CHECK(r.gpe == 0.0);
  CHECK(r.fpe_cents == 0.0);
  CHECK(r.vde == 0.0);
  CHECK(r.score == 0.0);
}

TEST_CASE("octave errors on half the frames give gpe 0.5") {
  Truth truth(100, 220.0);
  Truth est = truth;
  for (std::size_t i = 0; i < 50; ++i) est[i] = 440.0;
  CHECK(score(track_of(est), truth).gpe == 0.5);
}

TEST_CASE("all-unvoiced estimates give vde 1 and gpe 0") {
  const Truth truth(30, 150.0);
  const Truth est(30, std::nullopt);
  const auto r = score(track_of(est), truth);
  CHECK(r.vde == 1.0);
  CHECK(r.gpe == 0.0);
}

TEST_CASE("fine error is measured in cents and weighted into the score") {
  const Truth truth{100.0, 100.0};
  const Truth est{100.0 * std::pow(2.0, 10.0 / 1200.0), 100.0};
  const auto r = score(track_of(est), truth);
  CHECK(r.fpe_cents == doctest::Approx(5.0));
  CHECK(r.score == doctest::Approx(5.0 / 500.0));
}

TEST_CASE("score length mismatch is structural") {
  try {
    score(track_of(Truth(3, 100.0)), Truth(4, 100.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::structural);
  }
}

TEST_CASE("vde never decreases when truth-voiced frames are flipped to unvoiced") {
  const Truth truth{100.0, std::nullopt, 120.0, 130.0, std::nullopt, 150.0};
  Truth est{100.0, 110.0, std::nullopt, 130.0, std::nullopt, 150.0};
  double last = score(track_of(est), truth).vde;
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (!est[i] || !truth[i]) continue;
    est[i].reset();
    const double now = score(track_of(est), truth).vde;
    CHECK(now >= last);
    last = now;
  }
}

TEST_CASE("empty suite is a configuration error") {
  try {
    run_benchmark({}, {pitch::EngineSettings{}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
}

TEST_CASE("single method ranking and tie break by name") {
  const std::vector<SignalSpec> sigs{constant_sine(220.0, 0.3)};
  pitch::EngineSettings yin;
  CHECK(run_benchmark(sigs, {yin}).size() == 1);

  pitch::EngineSettings mpm;
  mpm.method = pitch::Method::mpm;
  const auto ranking = run_benchmark(sigs, {yin, mpm, yin});
  REQUIRE(ranking.size() == 3);
  for (std::size_t i = 1; i < ranking.size(); ++i) {
    CHECK((ranking[i - 1].score < ranking[i].score ||
           (ranking[i - 1].score == ranking[i].score && ranking[i - 1].method <= ranking[i].method)));
  }
}

TEST_CASE("clean sines are easy for every method") {
  Suite suite = clean_sine_sweep_suite();
  suite.signals.resize(5);  // quick subset; the full sweep runs in acceptance
  for (const auto& r : run_suite(suite)) {
    CAPTURE(r.method);
    CHECK(r.gpe <= 0.05);
  }
}

TEST_CASE("suite JSON round trip") {
  const Suite s = dysphonic_suite();
  CHECK(suite_from_json(suite_to_json(s)) == s);
  const Suite c = clean_sine_sweep_suite();
  CHECK(suite_from_json(suite_to_json(c)) == c);
}

TEST_CASE("suite parsing accepts method names and defaults") {
  const auto j = nlohmann::json::parse(R"({
    "schema_version": 1,
    "methods": ["YIN", {"method": "mpm", "voicing_threshold": 0.6}],
    "signals": [{"name": "a", "waveform": "pulse-train", "f0_contour": [[0, 150], [1, 180]],
                 "duration_s": 1, "seed": 4}]
  })");
  const Suite s = suite_from_json(j);
  REQUIRE(s.methods.size() == 2);
  CHECK(s.methods[0].method == pitch::Method::yin);
  CHECK(s.methods[1].voicing_threshold == 0.6);
  REQUIRE(s.signals.size() == 1);
  CHECK(s.signals[0].waveform == Waveform::pulse_train);
  CHECK(s.signals[0].f0_contour.size() == 2);

  CHECK_THROWS_AS(suite_from_json(nlohmann::json::parse(R"({"schema_version": 99, "signals": []})")), Error);
}

TEST_CASE("shipped suite files equal the built-in presets") {
  const std::string dir = PHONIC_DATA_DIR "/suites/";
  std::ifstream clean(dir + "clean_sines.json");
  std::ifstream dys(dir + "dysphonic.json");
  REQUIRE(clean.good());
  REQUIRE(dys.good());
  CHECK(suite_from_json(nlohmann::json::parse(clean)) == clean_sine_sweep_suite());
  CHECK(suite_from_json(nlohmann::json::parse(dys)) == dysphonic_suite());
}

TEST_CASE("report carries the selection criteria") {
  Suite s = clean_sine_sweep_suite();
  s.signals.resize(1);
  s.methods.resize(2);
  const auto ranking = run_suite(s);
  const auto j = report_json(ranking, s);
  CHECK(j.contains("criteria"));
  CHECK(j["ranking"].size() == 2);
  const auto text = report_text(ranking, s);
  CHECK(text.find("GPE") != std::string::npos);
}
