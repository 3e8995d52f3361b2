// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>
#include "game/config.hpp"
#include "game/engine.hpp"
#include "game/metrics.hpp"
#include "pitch/types.hpp"

namespace phonic::analytics {

inline constexpr int kRecordSchemaVersion = 1;

/// One played session as stored and uploaded.
///
/// JSON layout (UTF-8, keys sorted):
///   schema_version   integer, currently 1
///   session_id       string; a UUID for sessions created here, any of
///                    [A-Za-z0-9_-]{1,128} is accepted
///   patient_id       opaque non-empty string
///   started_at       RFC 3339 UTC timestamp, "YYYY-MM-DDTHH:MM:SS[.f]Z"
///   config           game config (level editor fields + seed)
///   calibration      {mel_low, mel_high}
///   engine_settings  pitch engine settings incl. framing
///   track            {settings, estimates: [{t, mel, voiced}]}: the
///                    smoothed control track, one estimate per game step
///   events           [{t_ms, kind, target_id, y?}]
///   metrics          compute_metrics(events, track, config, calibration)
struct SessionRecord {
  int schema_version = kRecordSchemaVersion;
  std::string session_id;
  std::string patient_id;
  std::string started_at;
  game::GameConfig config;
  game::Calibration calibration;
  pitch::EngineSettings engine_settings;
  pitch::PitchTrack track;
  std::vector<game::GameEvent> events;
  game::SessionMetrics metrics;

  bool operator==(const SessionRecord&) const = default;
};

/// Assembles a record from a played session: compacts the track and fills
/// in the metrics.
SessionRecord make_record(std::string patient_id, std::string session_id, std::string started_at,
                          const game::GameConfig& config, const game::Calibration& calibration,
                          const pitch::EngineSettings& engine_settings, const pitch::PitchTrack& track,
                          std::vector<game::GameEvent> events);

nlohmann::json record_to_json(const SessionRecord& rec);
/// Malformed documents are structural errors.
SessionRecord record_from_json(const nlohmann::json& j);

/// The canonical serialization: record_to_json dumped without whitespace.
std::string canonical_dump(const SessionRecord& rec);

/// Lower-case hex SHA-256 of the canonical serialization.
std::string checksum(const SessionRecord& rec);
std::string sha256_hex(std::string_view bytes);

/// Keeps only what a record stores of a track (t, mel, voiced), so that a
/// record built from it survives a JSON round trip unchanged.
pitch::PitchTrack compact_track(const pitch::PitchTrack& track);

/// Field checks plus the integrity rule: metrics must equal a fresh
/// compute_metrics over the stored track and events. Throws a structural
/// (or configuration) error on the first failure.
void validate_record(const SessionRecord& rec);

bool is_valid_session_id(std::string_view id);
bool is_rfc3339_utc(std::string_view ts);

std::string new_session_id();
std::string utc_now_rfc3339();

}  // namespace phonic::analytics
