// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pitch/types.hpp"

namespace phonic::game {

/// Level-editor parameters. The spatial meaning of the two spreads is this
/// game's own: `x_spread` is the mean time between target spawns and
/// `y_spread` the height of the band targets are placed in.
struct GameConfig {
  double sensitivity = 1.0;             // gain from normalized Mel to screen
  double x_spread = 4.0;                // seconds between spawns (mean)
  double y_spread = 0.6;                // vertical band, in (0, 1]
  double incoming_speed = 0.1;          // screen widths per second
  double voice_maintenance_ms = 500.0;  // voiced time on target for a hit
  double session_duration_s = 120.0;
  double hit_radius = 0.08;             // in (0, 0.5)
  std::uint64_t seed = 1;

  bool operator==(const GameConfig&) const = default;
};

struct Violation {
  std::string field;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Every violated constraint, in field order. Empty means valid.
std::vector<Violation> validate_config(const GameConfig& cfg);

/// A patient's comfortable Mel range.
struct Calibration {
  double mel_low = 0.0;
  double mel_high = 0.0;

  void validate() const;

  bool operator==(const Calibration&) const = default;
};

inline constexpr double kMinCalibrationRangeMel = 50.0;
inline constexpr double kMinCalibrationVoicedMs = 1000.0;

/// Range from a guided sweep: the 5th and 95th percentiles of the voiced Mel
/// values. Needs at least one second of voiced frames and a range of at
/// least 50 Mel; anything less is a calibration error.
Calibration calibrate(const pitch::PitchTrack& sweep);

/// y = clamp(0.5 + sensitivity * (mel - mid) / (mel_high - mel_low), 0, 1)
double map_pitch_to_y(double mel, const Calibration& cal, double sensitivity);

/// Linear-interpolation percentile (p in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double p);

}  // namespace phonic::game
