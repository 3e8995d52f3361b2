// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <thread>

#include "../support/fixtures.hpp"
#include "analytics/progress.hpp"
#include "analytics/record.hpp"
#include "analytics/store.hpp"
#include "common/error.hpp"
#include "doctest.h"

using namespace phonic;
using namespace phonic::analytics;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("phonic-test-" + new_session_id());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SessionRecord record_with(const std::string& patient, double phonation, double pitch_change, double hit_rate,
                          std::size_t i) {
  SessionRecord r;
  r.patient_id = patient;
  r.session_id = "s" + std::to_string(i);
  r.started_at = "2026-01-0" + std::to_string(1 + i % 9) + "T10:00:00Z";
  r.metrics.phonation_time_ms = phonation;
  r.metrics.pitch_change_mel = pitch_change;
  r.metrics.hit_rate = hit_rate;
  return r;
}

std::vector<SessionRecord> series(const std::vector<double>& phonation, const std::vector<double>& pitch_change,
                                  double last_hit_rate) {
  std::vector<SessionRecord> out;
  for (std::size_t i = 0; i < phonation.size(); ++i) {
    out.push_back(record_with("p", phonation[i], pitch_change[i], i + 1 == phonation.size() ? last_hit_rate : 0.5, i));
  }
  return out;
}

bool has_rule(const std::vector<Suggestion>& s, const std::string& id) {
  return std::any_of(s.begin(), s.end(), [&](const Suggestion& x) { return x.rule_id == id; });
}

}  // namespace

TEST_CASE("least squares on a perfect line") {
  const std::vector<double> x{0, 1, 2};
  const std::vector<double> y{1000, 2000, 3000};
  const auto t = least_squares(x, y);
  CHECK(t.slope == doctest::Approx(1000.0));
  CHECK(t.intercept == doctest::Approx(1000.0));
  CHECK(t.n == 3);
}

TEST_CASE("least squares conventions for one and zero points") {
  const std::vector<double> one{5.0};
  const std::vector<double> x0{0.0};
  const auto t = least_squares(x0, one);
  CHECK(t.slope == 0.0);
  CHECK(t.intercept == 5.0);
  CHECK(least_squares({}, {}) == Trend{});
}

TEST_CASE("progress over identical sessions is flat") {
  const auto s = series({1500, 1500, 1500, 1500}, {80, 80, 80, 80}, 0.5);
  const auto r = analyze_progress(s);
  CHECK(r.n == 4);
  for (const auto& [name, t] : r.trends) {
    CAPTURE(name);
    if (name == "reaction_time_ms") {
      CHECK(t.n == 0);
    } else {
      CHECK(t.slope == 0.0);
      CHECK(t.n == 4);
    }
  }
}

TEST_CASE("progress phonation slope") {
  const auto r = analyze_progress(series({1000, 2000, 3000}, {80, 90, 100}, 0.5));
  CHECK(r.trends.at("phonation_time_ms").slope == doctest::Approx(1000.0));
  CHECK(r.trends.at("phonation_time_ms").intercept == doctest::Approx(1000.0));
}

TEST_CASE("single session report") {
  auto s = series({1234}, {70}, 0.6);
  s[0].metrics.reaction_time_ms = 400.0;
  const auto r = analyze_progress(s);
  CHECK(r.n == 1);
  CHECK(r.latest == s[0].metrics);
  for (const auto& [name, t] : r.trends) CHECK(t.slope == 0.0);
  CHECK(r.trends.at("reaction_time_ms").n == 1);
}

TEST_CASE("progress rejects empty and mixed input") {
  CHECK_THROWS_AS(analyze_progress(std::vector<SessionRecord>{}), Error);
  auto s = series({1, 2}, {1, 2}, 0.5);
  s[1].patient_id = "other";
  try {
    analyze_progress(s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::structural);
  }
}

TEST_CASE("slopes match a brute-force oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform(2.0, 12.0));
    std::vector<double> y;
    for (std::size_t i = 0; i < n; ++i) y.push_back(rng.uniform(0.0, 5000.0));
    const auto r = analyze_progress(series(y, y, 0.5));
    // Normal equations solved by Cramer's rule.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i);
      sx += x;
      sy += y[i];
      sxx += x * x;
      sxy += x * y[i];
    }
    const double nd = static_cast<double>(n);
    const double slope = (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / nd;
    const auto& t = r.trends.at("phonation_time_ms");
    CHECK(std::abs(t.slope - slope) <= 1e-9 * std::max(1.0, std::abs(slope)));
    CHECK(std::abs(t.intercept - intercept) <= 1e-9 * std::max(1.0, std::abs(intercept)));
  }
}

TEST_CASE("no rule fires on healthy positive trends") {
  const auto r = analyze_progress(series({1000, 1500, 2000}, {60, 70, 80}, 0.5));
  CHECK(r.suggestions.empty());
}

TEST_CASE("R2 fires on a high latest hit rate") {
  const auto r = analyze_progress(series({1000, 1500, 2000}, {60, 70, 80}, 0.95));
  REQUIRE(has_rule(r.suggestions, "R2"));
  CHECK(r.suggestions.front().text == "raise voice_maintenance_ms");
}

TEST_CASE("R3 fires on five sessions of falling phonation") {
  const auto r = analyze_progress(series({5000, 4000, 3000, 2000, 1000}, {60, 70, 80, 90, 100}, 0.5));
  CHECK(has_rule(r.suggestions, "R3"));
  const auto four = analyze_progress(series({5000, 4000, 3000, 2000}, {60, 70, 80, 90}, 0.5));
  CHECK_FALSE(has_rule(four.suggestions, "R3"));
}

TEST_CASE("R1 needs three sessions of shrinking pitch range") {
  CHECK(has_rule(analyze_progress(series({1, 2, 3}, {100, 90, 80}, 0.5)).suggestions, "R1"));
  CHECK_FALSE(has_rule(analyze_progress(series({1, 2}, {100, 90}, 0.5)).suggestions, "R1"));
}

TEST_CASE("R4 fires on a low latest hit rate") {
  CHECK(has_rule(analyze_progress(series({1, 2, 3}, {1, 2, 3}, 0.1)).suggestions, "R4"));
}

TEST_CASE("suggest is pure and ordered by the table") {
  const auto r = analyze_progress(series({5, 4, 3, 2, 1}, {5, 4, 3, 2, 1}, 0.95));
  const auto a = suggest(r);
  CHECK(a == suggest(r));
  REQUIRE(a.size() == 3);
  CHECK(a[0].rule_id == "R1");
  CHECK(a[1].rule_id == "R2");
  CHECK(a[2].rule_id == "R3");
}

TEST_CASE("shipped rule table equals the built-in one") {
  std::ifstream in(PHONIC_DATA_DIR "/rules/default_rules.json");
  REQUIRE(in.good());
  CHECK(rules_from_json(nlohmann::json::parse(in)) == default_rules());
  CHECK(rules_from_json(rules_to_json(default_rules())) == default_rules());
  auto bad = rules_to_json(default_rules());
  bad["rules"][0]["op"] = "!=";
  CHECK_THROWS_AS(rules_from_json(bad), Error);
}

TEST_CASE("record JSON round trip and checksum") {
  Rng rng(8);
  const auto rec = testing::random_record(rng, "patient-1", new_session_id(), utc_now_rfc3339());
  CHECK_NOTHROW(validate_record(rec));
  const auto back = record_from_json(nlohmann::json::parse(canonical_dump(rec)));
  CHECK(back == rec);
  CHECK(checksum(back) == checksum(rec));
  CHECK(checksum(rec).size() == 64);
  auto tampered = rec;
  tampered.metrics.score += 1;
  CHECK(checksum(tampered) != checksum(rec));
  CHECK_THROWS_AS(validate_record(tampered), Error);
}

TEST_CASE("sha256 known answer") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("timestamps and ids") {
  CHECK(is_rfc3339_utc(utc_now_rfc3339()));
  CHECK(is_rfc3339_utc("2026-03-01T08:30:00Z"));
  CHECK_FALSE(is_rfc3339_utc("2026-03-01 08:30:00"));
  CHECK(is_valid_session_id(new_session_id()));
  CHECK_FALSE(is_valid_session_id("../etc"));
  CHECK(decode_path_component(encode_path_component("a/b c%.")) == "a/b c%.");
  CHECK(encode_path_component(".hidden").front() == '%');
}

TEST_CASE("store: save, load, duplicate, conflict, not found") {
  TempDir dir;
  SessionStore store(dir.path);
  Rng rng(9);
  const auto rec = testing::random_record(rng, "maria/02", "s-1", "2026-02-01T09:00:00Z");
  CHECK(store.save(rec) == SaveOutcome::created);
  CHECK(store.load("maria/02", "s-1") == rec);
  CHECK(store.save(rec) == SaveOutcome::duplicate);
  CHECK(store.session_ids("maria/02").size() == 1);

  auto changed = rec;
  changed.metrics.score += 1;
  try {
    store.save(changed);
    FAIL("expected a conflict");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::conflict);
  }
  try {
    store.load("maria/02", "nope");
    FAIL("expected not found");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_found);
  }
  CHECK_THROWS_AS(store.session_ids("ghost"), Error);
  CHECK(store.patients() == std::vector<std::string>{"maria/02"});
}

TEST_CASE("store: invalid records are refused") {
  TempDir dir;
  SessionStore store(dir.path);
  Rng rng(10);
  auto rec = testing::random_record(rng, "p", "s-1", "2026-02-01T09:00:00Z");
  rec.metrics.phonation_time_ms += 1.0;
  try {
    store.save(rec);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::structural);
  }
  CHECK_FALSE(store.has_patient("p"));
}

TEST_CASE("store: corruption is detected on load") {
  TempDir dir;
  SessionStore store(dir.path);
  Rng rng(11);
  const auto rec = testing::random_record(rng, "p", "s-1", "2026-02-01T09:00:00Z");
  store.save(rec);
  const auto path = dir.path / "patients" / "p" / "sessions" / "s-1.json";
  auto doc = nlohmann::json::parse(std::ifstream(path));
  doc["record"]["metrics"]["score"] = doc["record"]["metrics"]["score"].get<int>() + 1;
  std::ofstream(path) << doc.dump();
  try {
    store.load("p", "s-1");
    FAIL("expected corruption");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::corruption);
  }
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(store.load("p", "s-1"), Error);
}

TEST_CASE("store: patient sessions come back in time order") {
  TempDir dir;
  SessionStore store(dir.path);
  Rng rng(12);
  store.save(testing::random_record(rng, "p", "late", "2026-02-03T09:00:00Z"));
  store.save(testing::random_record(rng, "p", "early", "2026-02-01T09:00:00Z"));
  store.save(testing::random_record(rng, "p", "mid", "2026-02-01T09:00:00.5Z"));
  const auto all = store.load_patient("p");
  REQUIRE(all.size() == 3);
  CHECK(all[0].session_id == "early");
  CHECK(all[1].session_id == "mid");
  CHECK(all[2].session_id == "late");
}

TEST_CASE("store: concurrent saves for one patient all land") {
  TempDir dir;
  SessionStore store(dir.path);
  std::vector<SessionRecord> recs;
  Rng rng(13);
  for (int i = 0; i < 8; ++i) {
    recs.push_back(testing::random_record(rng, "p", "s" + std::to_string(i), "2026-02-01T09:00:00Z"));
  }
  std::vector<std::thread> threads;
  for (const auto& r : recs) {
    threads.emplace_back([&store, &r] {
      store.save(r);
      store.save(r);
    });
  }
  for (auto& t : threads) t.join();
  CHECK(store.session_ids("p").size() == 8);
  CHECK(store.load_patient("p").size() == 8);
}
