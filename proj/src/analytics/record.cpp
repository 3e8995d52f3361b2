// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "analytics/record.hpp"

#include <openssl/evp.h>

#include <array>
#include <boost/uuid/random_generator.hpp>
#include <boost/uuid/uuid_io.hpp>
#include <chrono>
#include <ctime>
#include <regex>
#include <set>

#include "common/error.hpp"
#include "game/json.hpp"
#include "pitch/json.hpp"

namespace phonic::analytics {

using nlohmann::json;

SessionRecord make_record(std::string patient_id, std::string session_id, std::string started_at,
                          const game::GameConfig& config, const game::Calibration& calibration,
                          const pitch::EngineSettings& engine_settings, const pitch::PitchTrack& track,
                          std::vector<game::GameEvent> events) {
  SessionRecord rec;
  rec.session_id = std::move(session_id);
  rec.patient_id = std::move(patient_id);
  rec.started_at = std::move(started_at);
  rec.config = config;
  rec.calibration = calibration;
  rec.engine_settings = engine_settings;
  rec.track = compact_track(track);
  rec.events = std::move(events);
  rec.metrics = game::compute_metrics(rec.events, rec.track, rec.config, rec.calibration);
  return rec;
}

json record_to_json(const SessionRecord& rec) {
  json events = json::array();
  for (const auto& e : rec.events) events.push_back(e);
  return json{{"schema_version", rec.schema_version},
              {"session_id", rec.session_id},
              {"patient_id", rec.patient_id},
              {"started_at", rec.started_at},
              {"config", rec.config},
              {"calibration", rec.calibration},
              {"engine_settings", rec.engine_settings},
              {"track", pitch::track_to_json(rec.track, true)},
              {"events", std::move(events)},
              {"metrics", rec.metrics}};
}

SessionRecord record_from_json(const json& j) {
  try {
    if (!j.is_object()) fail(ErrorKind::structural, "session record must be an object");
    SessionRecord rec;
    rec.schema_version = j.at("schema_version").get<int>();
    if (rec.schema_version != kRecordSchemaVersion) {
      fail(ErrorKind::structural,
           "unsupported session schema_version " + std::to_string(rec.schema_version));
    }
    rec.session_id = j.at("session_id").get<std::string>();
    rec.patient_id = j.at("patient_id").get<std::string>();
    rec.started_at = j.at("started_at").get<std::string>();
    rec.config = j.at("config").get<game::GameConfig>();
    rec.calibration = j.at("calibration").get<game::Calibration>();
    rec.engine_settings = j.at("engine_settings").get<pitch::EngineSettings>();
    rec.track = pitch::track_from_json(j.at("track"));
    for (const auto& e : j.at("events")) rec.events.push_back(e.get<game::GameEvent>());
    rec.metrics = j.at("metrics").get<game::SessionMetrics>();
    return rec;
  } catch (const json::exception& e) {
    fail(ErrorKind::structural, std::string("malformed session record: ") + e.what());
  }
}

std::string canonical_dump(const SessionRecord& rec) { return record_to_json(rec).dump(); }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::io, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

std::string checksum(const SessionRecord& rec) { return sha256_hex(canonical_dump(rec)); }

pitch::PitchTrack compact_track(const pitch::PitchTrack& track) {
  return pitch::track_from_json(pitch::track_to_json(track, true));
}

bool is_valid_session_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    if (!ok) return false;
  }
  return true;
}

bool is_rfc3339_utc(std::string_view ts) {
  static const std::regex kPattern(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?Z)");
  return std::regex_match(ts.begin(), ts.end(), kPattern);
}

void validate_record(const SessionRecord& rec) {
  auto bad = [](const std::string& what) { fail(ErrorKind::structural, "invalid session: " + what); };
  if (rec.schema_version != kRecordSchemaVersion) bad("unsupported schema_version");
  if (!is_valid_session_id(rec.session_id)) bad("session_id must match [A-Za-z0-9_-]{1,128}");
  if (rec.patient_id.empty()) bad("empty patient_id");
  if (!is_rfc3339_utc(rec.started_at)) bad("started_at is not an RFC 3339 UTC timestamp");
  if (auto v = game::validate_config(rec.config); !v.empty()) bad("config: " + v.front().message);
  rec.calibration.validate();
  rec.engine_settings.validate();
  rec.track.validate();
  if (!(rec.track.settings.hop_ms() > 0.0)) bad("track has no hop");
  if (rec.events.empty()) bad("no events");
  for (std::size_t i = 1; i < rec.events.size(); ++i) {
    if (rec.events[i].t_ms < rec.events[i - 1].t_ms) bad("events out of time order");
  }
  std::set<std::uint64_t> spawned;
  for (const auto& e : rec.events) {
    if (e.kind == game::EventKind::spawn && e.target_id) spawned.insert(*e.target_id);
    const bool resolves = e.kind == game::EventKind::hit || e.kind == game::EventKind::miss;
    if (resolves && (!e.target_id || !spawned.contains(*e.target_id))) bad("HIT/MISS without a prior SPAWN");
  }
  if (rec.events.back().kind != game::EventKind::session_end) bad("events do not end with SESSION_END");
  const auto recomputed = game::compute_metrics(rec.events, rec.track, rec.config, rec.calibration);
  if (!(recomputed == rec.metrics)) bad("stored metrics differ from the recomputed metrics");
}

std::string new_session_id() {
  thread_local boost::uuids::random_generator gen;
  return boost::uuids::to_string(gen());
}

std::string utc_now_rfc3339() {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

}  // namespace phonic::analytics
