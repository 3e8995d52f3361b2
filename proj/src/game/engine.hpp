// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "common/rng.hpp"
#include "game/config.hpp"
#include "pitch/types.hpp"

namespace phonic::game {

// Targets enter at the right edge and are missed once past the left margin.
inline constexpr double kSpawnX = 1.0;
inline constexpr double kMissX = -0.1;

struct Target {
  std::uint64_t id = 0;
  double x = kSpawnX;
  double y = 0.5;
  double spawned_at_ms = 0.0;
  double hold_ms = 0.0;

  bool operator==(const Target&) const = default;
};

struct GameState {
  double clock_ms = 0.0;
  double avatar_y = 0.5;
  std::vector<Target> targets;  // ascending id
  std::int64_t score = 0;
  Rng::State rng{};
  double next_spawn_ms = 0.0;
  std::uint64_t next_target_id = 1;
  bool voiced = false;
  bool finished = false;
  std::uint64_t steps = 0;

  bool operator==(const GameState&) const = default;
};

enum class EventKind { spawn, hit, miss, phonation_start, phonation_stop, session_end };

std::string_view to_string(EventKind kind) noexcept;
EventKind event_kind_from_string(std::string_view name);

struct GameEvent {
  double t_ms = 0.0;
  EventKind kind = EventKind::spawn;
  std::optional<std::uint64_t> target_id;
  std::optional<double> y;  // SPAWN only: the target's height

  bool operator==(const GameEvent&) const = default;
};

struct StepResult {
  GameState state;
  std::vector<GameEvent> events;
};

/// Fresh session: clock 0, avatar centered, RNG seeded from cfg.seed and the
/// first spawn time drawn.
GameState new_game(const GameConfig& cfg);

/// Advances the game by one hop of dt_ms. Within a step:
///   1. the clock advances;
///   2. a change of the voicing flag emits PHONATION_START / PHONATION_STOP;
///   3. a voiced estimate moves the avatar to map_pitch_to_y(mel); an
///      unvoiced one leaves it where it is;
///   4. targets move left by incoming_speed * dt;
///   5. each target on which the patient is voiced within hit_radius
///      accumulates dt of hold, any other target's hold resets to 0; a hold
///      reaching voice_maintenance_ms is a HIT (score + 1, target removed);
///   6. targets left of x = -0.1 are a MISS and removed;
///   7. due spawns are emitted (gap ~ U[0.5, 1.5] * x_spread seconds,
///      y ~ U[0.5 - y_spread / 2, 0.5 + y_spread / 2]);
///   8. reaching session_duration_s emits SESSION_END and finishes.
/// Stepping a finished state is a state error.
StepResult step(GameState state, const pitch::PitchEstimate& est, const GameConfig& cfg,
                const Calibration& cal, double dt_ms);

/// Ends a session early (stream stopped): emits SESSION_END at the current
/// clock. A state error if already finished.
StepResult end_session(GameState state);

/// FNV-1a over every field of the state.
std::uint64_t state_hash(const GameState& state);

struct Simulation {
  GameState state;
  std::vector<GameEvent> events;
};

/// Plays a stored control track from a fresh game: one step per estimate at
/// the track's hop until the track or the session runs out, then
/// end_session if the clock did not reach the limit.
Simulation simulate(const GameConfig& cfg, const Calibration& cal, const pitch::PitchTrack& track);

}  // namespace phonic::game
