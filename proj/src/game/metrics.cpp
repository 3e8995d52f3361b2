// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "game/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "common/error.hpp"

namespace phonic::game {

namespace {

struct Spawn {
  std::size_t step = 0;
  double y = 0.5;
};

// Step index (0-based) of an event time; clocks are sums of equal hops.
std::size_t step_of(double t_ms, double hop_ms) {
  const auto k = std::llround(t_ms / hop_ms) - 1;
  return k < 0 ? 0 : static_cast<std::size_t>(k);
}

}  // namespace

SessionMetrics compute_metrics(std::span<const GameEvent> events, const pitch::PitchTrack& track,
                               const GameConfig& cfg, const Calibration& cal) {
  if (events.empty()) fail(ErrorKind::structural, "empty event log");
  if (events.back().kind != EventKind::session_end) {
    fail(ErrorKind::structural, "event log does not end with SESSION_END");
  }
  cal.validate();
  const double hop = track.settings.hop_ms();

  SessionMetrics m;
  std::vector<double> mels;
  std::int64_t voiced = 0;
  for (const auto& e : track.estimates) {
    if (e.voiced && e.mel) {
      ++voiced;
      mels.push_back(*e.mel);
    }
  }
  m.phonation_time_ms = static_cast<double>(voiced) * hop;
  if (!mels.empty()) m.pitch_change_mel = percentile(mels, 0.95) - percentile(mels, 0.05);
  m.duration_s = events.back().t_ms / 1000.0;

  // Avatar height after each step, as the engine sets it.
  std::vector<double> avatar;
  avatar.reserve(track.estimates.size());
  double y = 0.5;
  for (const auto& e : track.estimates) {
    if (e.voiced && e.mel) y = map_pitch_to_y(*e.mel, cal, cfg.sensitivity);
    avatar.push_back(y);
  }

  std::map<std::uint64_t, Spawn> spawns;
  double reaction_sum = 0.0;
  std::int64_t reaction_n = 0;
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::spawn:
        ++m.spawns;
        if (e.target_id && e.y) spawns[*e.target_id] = {step_of(e.t_ms, hop), *e.y};
        break;
      case EventKind::hit: {
        ++m.hits;
        ++m.score;
        if (!e.target_id) break;
        auto it = spawns.find(*e.target_id);
        if (it == spawns.end() || it->second.step >= avatar.size()) break;
        const auto [ks, ty] = it->second;
        const double start = std::abs(avatar[ks] - ty);
        const std::size_t end = std::min(step_of(e.t_ms, hop), avatar.size() - 1);
        for (std::size_t k = ks + 1; k <= end; ++k) {
          if (start - std::abs(avatar[k] - ty) >= kReactionThreshold) {
            reaction_sum += static_cast<double>(k - ks) * hop;
            ++reaction_n;
            break;
          }
        }
        break;
      }
      case EventKind::miss: ++m.misses; break;
      default: break;
    }
  }
  if (reaction_n > 0) m.reaction_time_ms = reaction_sum / static_cast<double>(reaction_n);
  const auto resolved = m.hits + m.misses;
  m.hit_rate = resolved > 0 ? static_cast<double>(m.hits) / static_cast<double>(resolved) : 0.0;
  return m;
}

}  // namespace phonic::game
