// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

// Random configs and played sessions shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "analytics/record.hpp"
#include "common/rng.hpp"
#include "game/config.hpp"
#include "game/engine.hpp"
#include "pitch/types.hpp"

namespace phonic::testing {

inline game::GameConfig random_config(Rng& rng) {
  game::GameConfig c;
  c.sensitivity = rng.uniform(0.5, 2.0);
  c.x_spread = rng.uniform(0.5, 3.0);
  c.y_spread = rng.uniform(0.1, 1.0);
  c.incoming_speed = rng.uniform(0.1, 0.6);
  c.voice_maintenance_ms = rng.uniform(100.0, 800.0);
  c.session_duration_s = rng.uniform(10.0, 20.0);
  c.hit_radius = rng.uniform(0.03, 0.2);
  c.seed = rng.next();
  return c;
}

inline game::Calibration random_calibration(Rng& rng) {
  const double low = rng.uniform(150.0, 400.0);
  return {low, low + rng.uniform(60.0, 300.0)};
}

/// Engine settings whose hop is `hop` samples at 44.1 kHz.
inline pitch::EngineSettings settings_with_hop(int hop = 512) {
  pitch::EngineSettings s;
  s.hop_size = hop;
  return s;
}

inline double mel_for_y(double y, const game::Calibration& cal, double sensitivity) {
  const double mid = 0.5 * (cal.mel_low + cal.mel_high);
  return mid + (y - 0.5) * (cal.mel_high - cal.mel_low) / sensitivity;
}

/// A patient that aims for the oldest target with probability `skill`,
/// wanders otherwise, and pauses for breath now and then. Produces the
/// estimate sequence as it plays; the returned track is what the game saw.
struct Played {
  pitch::PitchTrack track;
  std::vector<game::GameEvent> events;
  game::GameState final_state;
};

inline Played play_random(const game::GameConfig& cfg, const game::Calibration& cal, Rng& rng,
                          double skill = 0.7, const pitch::EngineSettings& settings = settings_with_hop()) {
  Played p;
  p.track.settings = settings;
  const double hop = settings.hop_ms();
  auto state = game::new_game(cfg);
  double mel = 0.5 * (cal.mel_low + cal.mel_high);
  int pause = 0;
  for (std::size_t i = 0; !state.finished; ++i) {
    const double t = static_cast<double>(i) * hop;
    pitch::PitchEstimate est;
    if (pause > 0) {
      --pause;
      est = pitch::PitchEstimate::unvoiced(t);
    } else {
      if (rng.uniform() < 0.01) pause = static_cast<int>(rng.uniform(5.0, 60.0));
      double goal = mel + rng.uniform(-20.0, 20.0);
      if (!state.targets.empty() && rng.uniform() < skill) {
        goal = mel_for_y(state.targets.front().y, cal, cfg.sensitivity);
      }
      mel += 0.3 * (goal - mel) + rng.uniform(-1.0, 1.0);
      mel = std::max(mel, 1.0);
      est = pitch::PitchEstimate::voiced_mel(t, mel, 0.9);
    }
    p.track.estimates.push_back(est);
    auto r = game::step(std::move(state), est, cfg, cal, hop);
    state = std::move(r.state);
    p.events.insert(p.events.end(), r.events.begin(), r.events.end());
  }
  p.final_state = state;
  return p;
}

inline analytics::SessionRecord random_record(Rng& rng, const std::string& patient, const std::string& id,
                                              const std::string& started_at, double skill = 0.7) {
  const auto cfg = random_config(rng);
  const auto cal = random_calibration(rng);
  const auto settings = settings_with_hop();
  const auto played = play_random(cfg, cal, rng, skill, settings);
  return analytics::make_record(patient, id, started_at, cfg, cal, settings, played.track, played.events);
}

}  // namespace phonic::testing
