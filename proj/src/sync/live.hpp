// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>
#include "analytics/store.hpp"
#include "game/config.hpp"
#include "game/engine.hpp"
#include "pitch/framing.hpp"
#include "pitch/smoothing.hpp"
#include "pitch/types.hpp"

namespace phonic::sync {

/// Chunks whose client timestamp trails the server's sample clock by more
/// than this are dropped with a WARNING.
inline constexpr double kLateChunkMs = 500.0;

/// Server side of one live stream, independent of the transport.
///
/// Client messages (JSON objects with a "type"):
///   START        {patient_id, session_id?, started_at?, config,
///                 calibration, engine_settings}
///   AUDIO_CHUNK  {t_ms, samples: base64 float32 LE mono at
///                 engine_settings.sample_rate}
///   STOP         {}
/// Server messages:
///   STATE          {clock_ms, avatar_y, targets, score, finished, mel, voiced}
///                  once per game step
///   EVENT          {event: GameEvent}
///   WARNING        {code, message}
///   SESSION_SAVED  {session_id, patient_id, checksum}
///   ERROR          {code, message[, violations]}
///
/// Audio is framed at the hop, pitch-tracked, median-smoothed (which delays
/// the control signal by IncrementalSmoother::lookahead hops) and stepped
/// through the game. When the session ends, by STOP or by reaching its
/// duration, the record is saved and SESSION_SAVED follows. Any error ends
/// the stream with an ERROR message.
class LiveSession {
 public:
  explicit LiveSession(analytics::SessionStore& store);

  /// Handles one client message and returns the replies in order.
  std::vector<nlohmann::json> handle(const nlohmann::json& message);

  /// True once the stream should be closed (saved or failed).
  bool closed() const noexcept { return phase_ == Phase::closed; }
  std::optional<std::string> session_id() const;

 private:
  enum class Phase { idle, running, closed };

  void start(const nlohmann::json& m, std::vector<nlohmann::json>& out);
  void audio(const nlohmann::json& m, std::vector<nlohmann::json>& out);
  void stop(std::vector<nlohmann::json>& out);
  void advance(const pitch::PitchEstimate& smoothed, std::vector<nlohmann::json>& out);
  void finish(std::vector<nlohmann::json>& out);

  analytics::SessionStore& store_;
  Phase phase_ = Phase::idle;

  std::string patient_id_;
  std::string session_id_;
  std::string started_at_;
  game::GameConfig config_;
  game::Calibration calibration_;
  pitch::EngineSettings settings_;

  std::optional<pitch::FrameAssembler> assembler_;
  std::optional<pitch::IncrementalSmoother> smoother_;
  game::GameState state_;
  pitch::PitchTrack track_;  // the estimates the game was stepped with
  std::vector<game::GameEvent> events_;
};

nlohmann::json error_message(const std::string& code, const std::string& message);

}  // namespace phonic::sync
