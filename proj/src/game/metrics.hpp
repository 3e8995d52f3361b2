// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "game/config.hpp"
#include "game/engine.hpp"
#include "pitch/types.hpp"

namespace phonic::game {

inline constexpr double kReactionThreshold = 0.02;  // screen units

struct SessionMetrics {
  double phonation_time_ms = 0.0;
  double pitch_change_mel = 0.0;  // p95 - p5 of voiced Mel
  double duration_s = 0.0;
  std::optional<double> reaction_time_ms;
  std::int64_t score = 0;
  std::int64_t hits = 0;
  std::int64_t misses = 0;
  std::int64_t spawns = 0;
  double hit_rate = 0.0;  // hits / (hits + misses), 0 with neither

  bool operator==(const SessionMetrics&) const = default;
};

/// Metrics of one played session. `track` is the control track the game was
/// stepped with (one estimate per step); the calibration is needed to replay
/// the avatar's height for reaction times.
///
/// Reaction time of a hit target is the delay from its spawn step to the
/// first later step at which the avatar's distance to it has shrunk by at
/// least 0.02; targets where that never happens do not contribute. Absent
/// when nothing contributes.
///
/// An empty log or one without SESSION_END is a structural error.
SessionMetrics compute_metrics(std::span<const GameEvent> events, const pitch::PitchTrack& track,
                               const GameConfig& cfg, const Calibration& cal);

}  // namespace phonic::game
