// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>
#include "analytics/record.hpp"
#include "game/metrics.hpp"

namespace phonic::analytics {

/// Metrics followed across sessions, in report order.
inline constexpr std::array<const char*, 6> kTrendMetrics = {
    "phonation_time_ms", "pitch_change_mel", "duration_s", "reaction_time_ms", "score", "hit_rate"};

/// Value of a named metric; reaction_time_ms may be absent. Unknown names
/// are a configuration error.
std::optional<double> metric_value(const game::SessionMetrics& m, const std::string& name);

struct Trend {
  double slope = 0.0;  // per session
  double intercept = 0.0;
  std::size_t n = 0;  // sessions with a value for this metric

  bool operator==(const Trend&) const = default;
};

/// Ordinary least squares of y over x. One point: slope 0, intercept y.
/// No points: all zero.
Trend least_squares(std::span<const double> x, std::span<const double> y);

/// One row of the suggestion table.
///   kind "trend":  compares the metric's slope; fires only with at least
///                  min_sessions values.
///   kind "latest": compares the metric in the most recent session.
///   op: one of < <= > >=
struct Rule {
  std::string id;
  std::string kind;
  std::string metric;
  std::string op;
  double threshold = 0.0;
  std::size_t min_sessions = 1;
  std::string suggestion;

  bool operator==(const Rule&) const = default;
};

struct RuleTable {
  int version = 1;
  std::vector<Rule> rules;

  bool operator==(const RuleTable&) const = default;
};

/// The built-in table (identical to data/rules/default_rules.json):
///   R1 trend  pitch_change_mel  slope <  0    n >= 3  "increase y_spread"
///   R2 latest hit_rate                >  0.9          "raise voice_maintenance_ms"
///   R3 trend  phonation_time_ms slope <= 0    n >= 5  "flag for therapist review"
///   R4 latest hit_rate                <  0.3          "lower voice_maintenance_ms"
const RuleTable& default_rules();
RuleTable rules_from_json(const nlohmann::json& j);
nlohmann::json rules_to_json(const RuleTable& table);

struct Suggestion {
  std::string rule_id;
  std::string text;

  bool operator==(const Suggestion&) const = default;
};

struct ProgressReport {
  std::string patient_id;
  std::size_t n = 0;  // sessions analyzed
  std::map<std::string, Trend> trends;
  game::SessionMetrics latest;
  std::string latest_session_id;
  int rules_version = 0;
  std::vector<Suggestion> suggestions;

  bool operator==(const ProgressReport&) const = default;
};

/// Trends over session index 0..n-1 of time-ordered sessions of one
/// patient, then suggest(). Empty input or mixed patients are structural
/// errors.
ProgressReport analyze_progress(std::span<const SessionRecord> sessions,
                                const RuleTable& rules = default_rules());

/// Evaluates the table in order; pure.
std::vector<Suggestion> suggest(const ProgressReport& report, const RuleTable& rules = default_rules());

nlohmann::json report_to_json(const ProgressReport& report);
std::string report_text(const ProgressReport& report);

}  // namespace phonic::analytics
