// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "analytics/progress.hpp"

#include <cmath>
#include <sstream>

#include "common/error.hpp"
#include "game/json.hpp"

namespace phonic::analytics {

using nlohmann::json;

std::optional<double> metric_value(const game::SessionMetrics& m, const std::string& name) {
  if (name == "phonation_time_ms") return m.phonation_time_ms;
  if (name == "pitch_change_mel") return m.pitch_change_mel;
  if (name == "duration_s") return m.duration_s;
  if (name == "reaction_time_ms") return m.reaction_time_ms;
  if (name == "score") return static_cast<double>(m.score);
  if (name == "hit_rate") return m.hit_rate;
  if (name == "hits") return static_cast<double>(m.hits);
  if (name == "misses") return static_cast<double>(m.misses);
  fail(ErrorKind::configuration, "unknown metric '" + name + "'");
}

Trend least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorKind::structural, "least squares needs equal lengths");
  Trend t;
  t.n = x.size();
  if (t.n == 0) return t;
  const double nd = static_cast<double>(t.n);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < t.n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= nd;
  my /= nd;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < t.n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  t.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  t.intercept = my - t.slope * mx;
  return t;
}

namespace {

RuleTable make_default_rules() {
  RuleTable t;
  t.version = 1;
  t.rules = {
      {"R1", "trend", "pitch_change_mel", "<", 0.0, 3, "increase y_spread"},
      {"R2", "latest", "hit_rate", ">", 0.9, 1, "raise voice_maintenance_ms"},
      {"R3", "trend", "phonation_time_ms", "<=", 0.0, 5, "flag for therapist review"},
      {"R4", "latest", "hit_rate", "<", 0.3, 1, "lower voice_maintenance_ms"},
  };
  return t;
}

bool compare(double v, const std::string& op, double threshold) {
  if (op == "<") return v < threshold;
  if (op == "<=") return v <= threshold;
  if (op == ">") return v > threshold;
  if (op == ">=") return v >= threshold;
  fail(ErrorKind::configuration, "unknown rule operator '" + op + "'");
}

}  // namespace

const RuleTable& default_rules() {
  static const RuleTable table = make_default_rules();
  return table;
}

RuleTable rules_from_json(const json& j) {
  try {
    RuleTable t;
    t.version = j.at("version").get<int>();
    for (const auto& r : j.at("rules")) {
      Rule rule;
      rule.id = r.at("id").get<std::string>();
      rule.kind = r.at("kind").get<std::string>();
      rule.metric = r.at("metric").get<std::string>();
      rule.op = r.at("op").get<std::string>();
      rule.threshold = r.at("threshold").get<double>();
      rule.min_sessions = r.value("min_sessions", std::size_t{1});
      rule.suggestion = r.at("suggestion").get<std::string>();
      if (rule.kind != "trend" && rule.kind != "latest") {
        fail(ErrorKind::configuration, "rule " + rule.id + ": unknown kind '" + rule.kind + "'");
      }
      compare(0.0, rule.op, 0.0);
      metric_value(game::SessionMetrics{}, rule.metric);
      t.rules.push_back(std::move(rule));
    }
    return t;
  } catch (const json::exception& e) {
    fail(ErrorKind::configuration, std::string("invalid rule table: ") + e.what());
  }
}

json rules_to_json(const RuleTable& table) {
  json rules = json::array();
  for (const auto& r : table.rules) {
    rules.push_back({{"id", r.id},
                     {"kind", r.kind},
                     {"metric", r.metric},
                     {"op", r.op},
                     {"threshold", r.threshold},
                     {"min_sessions", r.min_sessions},
                     {"suggestion", r.suggestion}});
  }
  return json{{"version", table.version}, {"rules", std::move(rules)}};
}

ProgressReport analyze_progress(std::span<const SessionRecord> sessions, const RuleTable& rules) {
  if (sessions.empty()) fail(ErrorKind::structural, "no sessions to analyze");
  ProgressReport report;
  report.patient_id = sessions.front().patient_id;
  for (const auto& s : sessions) {
    if (s.patient_id != report.patient_id) {
      fail(ErrorKind::structural, "sessions of different patients cannot be analyzed together");
    }
  }
  report.n = sessions.size();
  for (const char* name : kTrendMetrics) {
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t i = 0; i < sessions.size(); ++i) {
      if (auto v = metric_value(sessions[i].metrics, name)) {
        x.push_back(static_cast<double>(i));
        y.push_back(*v);
      }
    }
    report.trends[name] = least_squares(x, y);
  }
  report.latest = sessions.back().metrics;
  report.latest_session_id = sessions.back().session_id;
  report.rules_version = rules.version;
  report.suggestions = suggest(report, rules);
  return report;
}

std::vector<Suggestion> suggest(const ProgressReport& report, const RuleTable& rules) {
  std::vector<Suggestion> out;
  for (const auto& rule : rules.rules) {
    std::optional<double> value;
    if (rule.kind == "trend") {
      auto it = report.trends.find(rule.metric);
      if (it != report.trends.end() && it->second.n >= rule.min_sessions) value = it->second.slope;
    } else if (report.n >= rule.min_sessions) {
      value = metric_value(report.latest, rule.metric);
    }
    if (value && compare(*value, rule.op, rule.threshold)) out.push_back({rule.id, rule.suggestion});
  }
  return out;
}

json report_to_json(const ProgressReport& report) {
  json trends = json::object();
  for (const auto& [name, t] : report.trends) {
    trends[name] = {{"slope", t.slope}, {"intercept", t.intercept}, {"n", t.n}};
  }
  json suggestions = json::array();
  for (const auto& s : report.suggestions) suggestions.push_back({{"rule_id", s.rule_id}, {"suggestion", s.text}});
  return json{{"patient_id", report.patient_id},
              {"n", report.n},
              {"trends", std::move(trends)},
              {"latest", report.latest},
              {"latest_session_id", report.latest_session_id},
              {"rules_version", report.rules_version},
              {"suggestions", std::move(suggestions)}};
}

std::string report_text(const ProgressReport& report) {
  std::ostringstream out;
  out << "patient " << report.patient_id << ", " << report.n << " session(s)\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %14s %14s %4s %14s\n", "metric", "slope/session", "intercept",
                "n", "latest");
  out << line;
  for (const char* name : kTrendMetrics) {
    const auto& t = report.trends.at(name);
    const auto latest = metric_value(report.latest, name);
    std::snprintf(line, sizeof line, "%-20s %14.4f %14.4f %4zu %14s\n", name, t.slope, t.intercept, t.n,
                  latest ? std::to_string(*latest).c_str() : "-");
    out << line;
  }
  if (report.suggestions.empty()) out << "no suggestions\n";
  for (const auto& s : report.suggestions) out << s.rule_id << ": " << s.text << "\n";
  return out.str();
}

}  // namespace phonic::analytics
