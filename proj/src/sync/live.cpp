// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "sync/live.hpp"

#include <algorithm>
#include <cmath>

#include "analytics/record.hpp"
#include "common/error.hpp"
#include "game/json.hpp"
#include "pitch/detector.hpp"
#include "pitch/json.hpp"
#include "sync/codec.hpp"

namespace phonic::sync {

using nlohmann::json;

json error_message(const std::string& code, const std::string& message) {
  return json{{"type", "ERROR"}, {"code", code}, {"message", message}};
}

LiveSession::LiveSession(analytics::SessionStore& store) : store_(store) {}

std::optional<std::string> LiveSession::session_id() const {
  if (session_id_.empty()) return std::nullopt;
  return session_id_;
}

std::vector<json> LiveSession::handle(const json& message) {
  std::vector<json> out;
  if (phase_ == Phase::closed) return out;
  try {
    if (!message.is_object() || !message.contains("type") || !message["type"].is_string()) {
      fail(ErrorKind::protocol, "message without a type");
    }
    const std::string type = message["type"].get<std::string>();
    if (type == "START") {
      if (phase_ != Phase::idle) fail(ErrorKind::protocol, "START sent twice");
      start(message, out);
    } else if (type == "AUDIO_CHUNK") {
      if (phase_ != Phase::running) fail(ErrorKind::protocol, "AUDIO_CHUNK before START");
      audio(message, out);
    } else if (type == "STOP") {
      if (phase_ != Phase::running) fail(ErrorKind::protocol, "STOP before START");
      stop(out);
    } else {
      fail(ErrorKind::protocol, "unknown message type '" + type + "'");
    }
  } catch (const Error& e) {
    json err = error_message(std::string(to_string(e.kind())), e.what());
    if (e.kind() == ErrorKind::configuration && message.is_object() && message.contains("config")) {
      try {
        err["violations"] = game::validate_config(message["config"].get<game::GameConfig>());
      } catch (...) {
      }
    }
    out.push_back(std::move(err));
    phase_ = Phase::closed;
  } catch (const json::exception& e) {
    out.push_back(error_message("protocol", std::string("malformed message: ") + e.what()));
    phase_ = Phase::closed;
  }
  return out;
}

void LiveSession::start(const json& m, std::vector<json>& out) {
  patient_id_ = m.at("patient_id").get<std::string>();
  if (patient_id_.empty()) fail(ErrorKind::protocol, "empty patient_id");
  session_id_ = m.contains("session_id") ? m["session_id"].get<std::string>() : analytics::new_session_id();
  if (!analytics::is_valid_session_id(session_id_)) fail(ErrorKind::protocol, "invalid session_id");
  started_at_ = m.contains("started_at") ? m["started_at"].get<std::string>() : analytics::utc_now_rfc3339();
  if (!analytics::is_rfc3339_utc(started_at_)) fail(ErrorKind::protocol, "started_at is not RFC 3339 UTC");

  config_ = m.at("config").get<game::GameConfig>();
  if (auto v = game::validate_config(config_); !v.empty()) {
    fail(ErrorKind::configuration, "invalid game config: " + v.front().message);
  }
  calibration_ = m.at("calibration").get<game::Calibration>();
  calibration_.validate();
  settings_ = m.contains("engine_settings") ? m["engine_settings"].get<pitch::EngineSettings>()
                                            : pitch::EngineSettings{};
  settings_.validate_for(settings_.sample_rate, static_cast<std::size_t>(settings_.frame_size));
  if (!store_.stored_checksum(patient_id_, session_id_).empty()) {
    fail(ErrorKind::conflict, "session " + session_id_ + " already exists");
  }

  assembler_.emplace(settings_.sample_rate, settings_.frame_size, settings_.hop_size);
  smoother_.emplace(settings_);
  state_ = game::new_game(config_);
  track_ = pitch::PitchTrack{};
  track_.settings = settings_;
  events_.clear();
  phase_ = Phase::running;
  (void)out;
}

void LiveSession::audio(const json& m, std::vector<json>& out) {
  const double t_ms = m.at("t_ms").get<double>();
  auto samples = decode_samples(m.at("samples").get<std::string>());
  if (state_.finished) return;  // the session already ended; late audio is moot

  const double server_ms = 1000.0 * static_cast<double>(assembler_->samples_received()) / settings_.sample_rate;
  if (t_ms + kLateChunkMs < server_ms) {
    out.push_back({{"type", "WARNING"},
                   {"code", "late_chunk"},
                   {"message", "chunk at " + std::to_string(t_ms) + " ms dropped; server clock at " +
                                   std::to_string(server_ms) + " ms"}});
    return;
  }
  for (auto& s : samples) s = std::isfinite(s) ? std::clamp(s, -1.0, 1.0) : 0.0;
  for (const auto& frame : assembler_->push(samples)) {
    const auto raw = pitch::detect_f0(frame, settings_);
    for (const auto& smoothed : smoother_->push(raw)) {
      if (state_.finished) break;
      advance(smoothed, out);
    }
    if (state_.finished) break;
  }
  if (state_.finished) finish(out);
}

void LiveSession::stop(std::vector<json>& out) {
  if (!state_.finished) {
    for (const auto& smoothed : smoother_->flush()) {
      if (state_.finished) break;
      advance(smoothed, out);
    }
  }
  if (!state_.finished) {
    auto r = game::end_session(std::move(state_));
    state_ = std::move(r.state);
    for (const auto& e : r.events) {
      events_.push_back(e);
      out.push_back({{"type", "EVENT"}, {"event", e}});
    }
  }
  finish(out);
}

void LiveSession::advance(const pitch::PitchEstimate& smoothed, std::vector<json>& out) {
  track_.estimates.push_back(smoothed);
  auto r = game::step(std::move(state_), smoothed, config_, calibration_, settings_.hop_ms());
  state_ = std::move(r.state);
  for (const auto& e : r.events) {
    events_.push_back(e);
    out.push_back({{"type", "EVENT"}, {"event", e}});
  }
  json s = game::state_to_json(state_);
  s["type"] = "STATE";
  s["mel"] = smoothed.mel ? json(*smoothed.mel) : json(nullptr);
  s["voiced"] = smoothed.voiced;
  out.push_back(std::move(s));
}

void LiveSession::finish(std::vector<json>& out) {
  const auto rec = analytics::make_record(patient_id_, session_id_, started_at_, config_, calibration_,
                                          settings_, track_, events_);
  store_.save(rec);
  out.push_back({{"type", "SESSION_SAVED"},
                 {"session_id", rec.session_id},
                 {"patient_id", rec.patient_id},
                 {"checksum", analytics::checksum(rec)}});
  phase_ = Phase::closed;
}

}  // namespace phonic::sync
