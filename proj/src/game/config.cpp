// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "game/config.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace phonic::game {

std::vector<Violation> validate_config(const GameConfig& cfg) {
  std::vector<Violation> out;
  auto check = [&out](bool ok, const char* field, const char* message) {
    if (!ok) out.push_back({field, message});
  };
  check(std::isfinite(cfg.sensitivity) && cfg.sensitivity > 0.0, "sensitivity", "sensitivity > 0");
  check(std::isfinite(cfg.x_spread) && cfg.x_spread > 0.0, "x_spread", "x_spread > 0");
  check(cfg.y_spread > 0.0 && cfg.y_spread <= 1.0, "y_spread", "y_spread in (0, 1]");
  check(std::isfinite(cfg.incoming_speed) && cfg.incoming_speed > 0.0, "incoming_speed",
        "incoming_speed > 0");
  check(std::isfinite(cfg.voice_maintenance_ms) && cfg.voice_maintenance_ms > 0.0,
        "voice_maintenance_ms", "voice_maintenance_ms > 0");
  check(std::isfinite(cfg.session_duration_s) && cfg.session_duration_s >= 10.0,
        "session_duration_s", "session_duration_s ≥ 10");
  check(cfg.hit_radius > 0.0 && cfg.hit_radius < 0.5, "hit_radius", "hit_radius in (0, 0.5)");
  return out;
}

void Calibration::validate() const {
  if (!std::isfinite(mel_low) || !std::isfinite(mel_high) || !(mel_low < mel_high)) {
    fail(ErrorKind::calibration, "calibration needs finite mel_low < mel_high");
  }
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) fail(ErrorKind::structural, "percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

Calibration calibrate(const pitch::PitchTrack& sweep) {
  std::vector<double> mels;
  for (const auto& e : sweep.estimates) {
    if (e.voiced && e.mel) mels.push_back(*e.mel);
  }
  const double voiced_ms = static_cast<double>(mels.size()) * sweep.settings.hop_ms();
  if (voiced_ms < kMinCalibrationVoicedMs) {
    fail(ErrorKind::calibration, "calibration needs at least 1 s of voiced frames, got " +
                                     std::to_string(voiced_ms) + " ms");
  }
  Calibration cal{percentile(mels, 0.05), percentile(mels, 0.95)};
  if (cal.mel_high - cal.mel_low < kMinCalibrationRangeMel) {
    fail(ErrorKind::calibration, "calibration range " + std::to_string(cal.mel_high - cal.mel_low) +
                                     " Mel is below 50 Mel");
  }
  return cal;
}

double map_pitch_to_y(double mel, const Calibration& cal, double sensitivity) {
  const double mid = 0.5 * (cal.mel_low + cal.mel_high);
  const double y = 0.5 + sensitivity * (mel - mid) / (cal.mel_high - cal.mel_low);
  return std::clamp(y, 0.0, 1.0);
}

}  // namespace phonic::game
