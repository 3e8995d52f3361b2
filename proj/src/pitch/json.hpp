// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <json.hpp>
#include "pitch/types.hpp"

namespace phonic::pitch {

// Missing fields fall back to the defaults of EngineSettings.
void to_json(nlohmann::json& j, const EngineSettings& s);
void from_json(const nlohmann::json& j, EngineSettings& s);

void to_json(nlohmann::json& j, const PitchEstimate& e);
void from_json(const nlohmann::json& j, PitchEstimate& e);

/// Full form carries f0_hz and confidence; the compact form (used in
/// session records) keeps only t, mel and the voicing flag.
nlohmann::json track_to_json(const PitchTrack& track, bool compact = false);
PitchTrack track_from_json(const nlohmann::json& j);

}  // namespace phonic::pitch
