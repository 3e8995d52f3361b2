// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "game/json.hpp"

#include "common/error.hpp"

namespace phonic::game {

using nlohmann::json;

void to_json(json& j, const GameConfig& c) {
  j = json{{"sensitivity", c.sensitivity},
           {"x_spread", c.x_spread},
           {"y_spread", c.y_spread},
           {"incoming_speed", c.incoming_speed},
           {"voice_maintenance_ms", c.voice_maintenance_ms},
           {"session_duration_s", c.session_duration_s},
           {"hit_radius", c.hit_radius},
           {"seed", c.seed}};
}

void from_json(const json& j, GameConfig& c) {
  if (!j.is_object()) fail(ErrorKind::structural, "game config must be an object");
  const GameConfig d;
  c.sensitivity = j.value("sensitivity", d.sensitivity);
  c.x_spread = j.value("x_spread", d.x_spread);
  c.y_spread = j.value("y_spread", d.y_spread);
  c.incoming_speed = j.value("incoming_speed", d.incoming_speed);
  c.voice_maintenance_ms = j.value("voice_maintenance_ms", d.voice_maintenance_ms);
  c.session_duration_s = j.value("session_duration_s", d.session_duration_s);
  c.hit_radius = j.value("hit_radius", d.hit_radius);
  c.seed = j.value("seed", d.seed);
}

void to_json(json& j, const Calibration& c) {
  j = json{{"mel_low", c.mel_low}, {"mel_high", c.mel_high}};
}

void from_json(const json& j, Calibration& c) {
  c.mel_low = j.at("mel_low").get<double>();
  c.mel_high = j.at("mel_high").get<double>();
}

void to_json(json& j, const GameEvent& e) {
  j = json{{"t_ms", e.t_ms}, {"kind", std::string(to_string(e.kind))}};
  j["target_id"] = e.target_id ? json(*e.target_id) : json(nullptr);
  if (e.y) j["y"] = *e.y;
}

void from_json(const json& j, GameEvent& e) {
  e = GameEvent{};
  e.t_ms = j.at("t_ms").get<double>();
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  if (auto it = j.find("target_id"); it != j.end() && !it->is_null()) {
    e.target_id = it->get<std::uint64_t>();
  }
  if (auto it = j.find("y"); it != j.end() && !it->is_null()) e.y = it->get<double>();
}

void to_json(json& j, const SessionMetrics& m) {
  j = json{{"phonation_time_ms", m.phonation_time_ms},
           {"pitch_change_mel", m.pitch_change_mel},
           {"duration_s", m.duration_s},
           {"reaction_time_ms", m.reaction_time_ms ? json(*m.reaction_time_ms) : json(nullptr)},
           {"score", m.score},
           {"hits", m.hits},
           {"misses", m.misses},
           {"spawns", m.spawns},
           {"hit_rate", m.hit_rate}};
}

void from_json(const json& j, SessionMetrics& m) {
  m = SessionMetrics{};
  m.phonation_time_ms = j.at("phonation_time_ms").get<double>();
  m.pitch_change_mel = j.at("pitch_change_mel").get<double>();
  m.duration_s = j.at("duration_s").get<double>();
  if (const auto& r = j.at("reaction_time_ms"); !r.is_null()) m.reaction_time_ms = r.get<double>();
  m.score = j.at("score").get<std::int64_t>();
  m.hits = j.at("hits").get<std::int64_t>();
  m.misses = j.at("misses").get<std::int64_t>();
  m.spawns = j.at("spawns").get<std::int64_t>();
  m.hit_rate = j.at("hit_rate").get<double>();
}

json state_to_json(const GameState& s) {
  json targets = json::array();
  for (const auto& t : s.targets) {
    targets.push_back({{"id", t.id}, {"x", t.x}, {"y", t.y}, {"hold_ms", t.hold_ms}});
  }
  return json{{"clock_ms", s.clock_ms},
              {"avatar_y", s.avatar_y},
              {"targets", std::move(targets)},
              {"score", s.score},
              {"finished", s.finished}};
}

void to_json(json& j, const Violation& v) {
  j = json{{"field", v.field}, {"message", v.message}};
}

json level_to_json(const Level& level) {
  return json{{"schema_version", kLevelSchemaVersion}, {"name", level.name}, {"config", level.config}};
}

Level level_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::structural, "level must be an object");
  const int version = j.value("schema_version", 0);
  if (version != kLevelSchemaVersion) {
    fail(ErrorKind::structural, "unsupported level schema_version " + std::to_string(version));
  }
  Level level;
  level.name = j.value("name", std::string{});
  level.config = j.at("config").get<GameConfig>();
  return level;
}

}  // namespace phonic::game
