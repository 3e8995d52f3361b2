// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "game/engine.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "common/error.hpp"

namespace phonic::game {

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::spawn: return "SPAWN";
    case EventKind::hit: return "HIT";
    case EventKind::miss: return "MISS";
    case EventKind::phonation_start: return "PHONATION_START";
    case EventKind::phonation_stop: return "PHONATION_STOP";
    case EventKind::session_end: return "SESSION_END";
  }
  return "?";
}

EventKind event_kind_from_string(std::string_view name) {
  for (auto k : {EventKind::spawn, EventKind::hit, EventKind::miss, EventKind::phonation_start,
                 EventKind::phonation_stop, EventKind::session_end}) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorKind::structural, "unknown event kind '" + std::string(name) + "'");
}

namespace {

double spawn_gap_ms(Rng& rng, const GameConfig& cfg) {
  return 1000.0 * cfg.x_spread * rng.uniform(0.5, 1.5);
}

}  // namespace

GameState new_game(const GameConfig& cfg) {
  if (auto v = validate_config(cfg); !v.empty()) {
    fail(ErrorKind::configuration, "invalid game config: " + v.front().message);
  }
  Rng rng(cfg.seed);
  GameState s;
  s.next_spawn_ms = spawn_gap_ms(rng, cfg);
  s.rng = rng.state();
  return s;
}

StepResult step(GameState s, const pitch::PitchEstimate& est, const GameConfig& cfg,
                const Calibration& cal, double dt_ms) {
  if (s.finished) fail(ErrorKind::state, "step on a finished session");
  if (!(dt_ms > 0.0)) fail(ErrorKind::configuration, "step needs dt_ms > 0");

  std::vector<GameEvent> events;
  s.clock_ms += dt_ms;
  ++s.steps;
  const double now = s.clock_ms;

  const bool voiced = est.voiced && est.mel.has_value();
  if (voiced != s.voiced) {
    events.push_back({now, voiced ? EventKind::phonation_start : EventKind::phonation_stop, {}, {}});
    s.voiced = voiced;
  }
  if (voiced) s.avatar_y = map_pitch_to_y(*est.mel, cal, cfg.sensitivity);

  const double dx = cfg.incoming_speed * dt_ms / 1000.0;
  std::vector<Target> remaining;
  remaining.reserve(s.targets.size());
  for (Target t : s.targets) {
    t.x -= dx;
    if (voiced && std::abs(s.avatar_y - t.y) <= cfg.hit_radius) {
      t.hold_ms += dt_ms;
    } else {
      t.hold_ms = 0.0;
    }
    if (t.hold_ms >= cfg.voice_maintenance_ms) {
      events.push_back({now, EventKind::hit, t.id, {}});
      ++s.score;
      continue;
    }
    if (t.x < kMissX) {
      events.push_back({now, EventKind::miss, t.id, {}});
      continue;
    }
    remaining.push_back(t);
  }
  s.targets = std::move(remaining);

  Rng rng = Rng::from_state(s.rng);
  while (now >= s.next_spawn_ms) {
    Target t;
    t.id = s.next_target_id++;
    t.y = rng.uniform(0.5 - cfg.y_spread / 2.0, 0.5 + cfg.y_spread / 2.0);
    t.spawned_at_ms = now;
    s.targets.push_back(t);
    events.push_back({now, EventKind::spawn, t.id, t.y});
    s.next_spawn_ms += spawn_gap_ms(rng, cfg);
  }
  s.rng = rng.state();

  if (now >= cfg.session_duration_s * 1000.0) {
    s.finished = true;
    events.push_back({now, EventKind::session_end, {}, {}});
  }
  return {std::move(s), std::move(events)};
}

StepResult end_session(GameState s) {
  if (s.finished) fail(ErrorKind::state, "session already finished");
  s.finished = true;
  std::vector<GameEvent> events{{s.clock_ms, EventKind::session_end, {}, {}}};
  return {std::move(s), std::move(events)};
}

namespace {

class Fnv1a {
 public:
  void bytes(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (v >> (8 * i)) & 0xFFU;
      hash_ *= 0x100000001B3ULL;
    }
  }
  void real(double v) { bytes(std::bit_cast<std::uint64_t>(v)); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

}  // namespace

std::uint64_t state_hash(const GameState& s) {
  Fnv1a h;
  h.real(s.clock_ms);
  h.real(s.avatar_y);
  h.bytes(s.targets.size());
  for (const auto& t : s.targets) {
    h.bytes(t.id);
    h.real(t.x);
    h.real(t.y);
    h.real(t.spawned_at_ms);
    h.real(t.hold_ms);
  }
  h.bytes(static_cast<std::uint64_t>(s.score));
  for (auto w : s.rng) h.bytes(w);
  h.real(s.next_spawn_ms);
  h.bytes(s.next_target_id);
  h.bytes(s.voiced ? 1 : 0);
  h.bytes(s.finished ? 1 : 0);
  h.bytes(s.steps);
  return h.value();
}

Simulation simulate(const GameConfig& cfg, const Calibration& cal, const pitch::PitchTrack& track) {
  cal.validate();
  Simulation sim{new_game(cfg), {}};
  const double dt = track.settings.hop_ms();
  for (const auto& est : track.estimates) {
    if (sim.state.finished) break;
    auto r = step(std::move(sim.state), est, cfg, cal, dt);
    sim.state = std::move(r.state);
    sim.events.insert(sim.events.end(), r.events.begin(), r.events.end());
  }
  if (!sim.state.finished) {
    auto r = end_session(std::move(sim.state));
    sim.state = std::move(r.state);
    sim.events.insert(sim.events.end(), r.events.begin(), r.events.end());
  }
  return sim;
}

}  // namespace phonic::game
