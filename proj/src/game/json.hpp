// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "game/config.hpp"
#include "game/engine.hpp"
#include "game/metrics.hpp"
#include <json.hpp>

namespace phonic::game {

inline constexpr int kLevelSchemaVersion = 1;

// Missing config fields take the defaults; nothing is validated here.
void to_json(nlohmann::json& j, const GameConfig& c);
void from_json(const nlohmann::json& j, GameConfig& c);

void to_json(nlohmann::json& j, const Calibration& c);
void from_json(const nlohmann::json& j, Calibration& c);

void to_json(nlohmann::json& j, const GameEvent& e);
void from_json(const nlohmann::json& j, GameEvent& e);

void to_json(nlohmann::json& j, const SessionMetrics& m);
void from_json(const nlohmann::json& j, SessionMetrics& m);

// Render-facing view: clock, avatar, targets, score, finished.
nlohmann::json state_to_json(const GameState& s);

void to_json(nlohmann::json& j, const Violation& v);

/// Level file: {"schema_version": 1, "name": ..., "config": {...}}.
struct Level {
  std::string name;
  GameConfig config;
};

nlohmann::json level_to_json(const Level& level);
Level level_from_json(const nlohmann::json& j);

}  // namespace phonic::game
