// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "eval/synth.hpp"
#include <json.hpp>
#include "pitch/types.hpp"

namespace phonic::eval {

// An estimate is a gross error when it is voiced and deviates from a voiced
// truth by more than this fraction.
inline constexpr double kGrossErrorThreshold = 0.2;
// score = gpe + vde + fpe_cents / kFineErrorCentsScale
inline constexpr double kFineErrorCentsScale = 500.0;

struct EvalResult {
  std::string method;
  double gpe = 0.0;        // gross errors / truth-voiced frames
  double fpe_cents = 0.0;  // mean |cents| over non-gross voiced/voiced frames
  double vde = 0.0;        // voicing disagreements / all frames
  double score = 0.0;

  bool operator==(const EvalResult&) const = default;
};

/// Scores a track against per-frame truth. Frame counts must match.
EvalResult score(const pitch::PitchTrack& track, const Truth& truth);

/// Runs every method entry over every signal, averages the per-signal
/// metrics, and returns one result per entry sorted by score (ties by
/// method name). With `smooth` set, tracks go through smooth_track first.
std::vector<EvalResult> run_benchmark(const std::vector<SignalSpec>& signals,
                                      const std::vector<pitch::EngineSettings>& method_settings,
                                      const Framing& framing = {}, bool smooth = false);

/// A versioned benchmark suite, as read from a suite file.
struct Suite {
  int schema_version = 1;
  Framing framing;
  bool smooth = false;
  std::vector<pitch::EngineSettings> methods;
  std::vector<SignalSpec> signals;

  bool operator==(const Suite&) const = default;
};

inline constexpr int kSuiteSchemaVersion = 1;

Suite suite_from_json(const nlohmann::json& j);
nlohmann::json suite_to_json(const Suite& suite);

std::vector<EvalResult> run_suite(const Suite& suite);

nlohmann::json report_json(const std::vector<EvalResult>& ranking, const Suite& suite);
std::string report_text(const std::vector<EvalResult>& ranking, const Suite& suite);

/// 20 clean sines log-spaced over [80, 500] Hz, one per signal, all seven
/// methods with default settings.
Suite clean_sine_sweep_suite();

/// Dysphonic stand-in voices: sawtooth and pulse-train sources with gliding
/// contours and silent gaps, jitter 3 %, shimmer 8 %, SNR 15 dB, fixed seeds.
Suite dysphonic_suite();

}  // namespace phonic::eval
