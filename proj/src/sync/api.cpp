// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "sync/api.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <vector>

#include "analytics/record.hpp"
#include "common/error.hpp"
#include "game/config.hpp"
#include "game/json.hpp"
#include "pitch/framing.hpp"
#include "pitch/json.hpp"
#include "pitch/smoothing.hpp"
#include "sync/codec.hpp"

namespace phonic::sync {

using nlohmann::json;

namespace {

HttpResponse error(int status, const std::string& code, const std::string& message) {
  return {status, json{{"error", code}, {"message", message}}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t at = 0;
  while (at < path.size()) {
    const auto slash = path.find('/', at);
    const auto end = slash == std::string::npos ? path.size() : slash;
    if (end > at) parts.push_back(percent_decode(path.substr(at, end - at)));
    at = end + 1;
  }
  return parts;
}

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_found: return 404;
    case ErrorKind::conflict: return 409;
    case ErrorKind::io:
    case ErrorKind::corruption: return 500;
    default: return 400;
  }
}

}  // namespace

std::string percent_decode(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out.push_back(static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

json progress_report(const analytics::SessionStore& store, const std::string& patient_id,
                     const analytics::RuleTable& rules) {
  const auto sessions = store.load_patient(patient_id);
  if (sessions.empty()) fail(ErrorKind::not_found, "no sessions for patient " + patient_id);
  return analytics::report_to_json(analytics::analyze_progress(sessions, rules));
}

analytics::RuleTable load_rules(const std::string& data_dir) {
  const auto path = std::filesystem::path(data_dir) / "rules.json";
  if (!std::filesystem::exists(path)) return analytics::default_rules();
  std::ifstream in(path);
  try {
    return analytics::rules_from_json(json::parse(in));
  } catch (const json::exception& e) {
    fail(ErrorKind::configuration, "unreadable " + path.string() + ": " + e.what());
  }
}

ApiHandler::ApiHandler(analytics::SessionStore& store, analytics::RuleTable rules, std::string token)
    : store_(store), rules_(std::move(rules)), token_(std::move(token)) {}

bool ApiHandler::authorized(const std::string& authorization) const {
  if (token_.empty()) return true;
  return authorization == "Bearer " + token_ || authorization == token_;
}

HttpResponse ApiHandler::handle(const std::string& method, const std::string& target, const std::string& body,
                                const std::string& authorization) const {
  if (!authorized(authorization)) return error(401, "unauthorized", "missing or wrong bearer token");
  const std::string path = target.substr(0, target.find('?'));
  const auto parts = split_path(path);
  const bool api = parts.size() >= 2 && parts[0] == "api" && parts[1] == "v1";
  if (!api) return error(404, "not_found", "no route for " + path);

  try {
    const std::vector<std::string> rest(parts.begin() + 2, parts.end());
    if (rest == std::vector<std::string>{"health"}) {
      if (method != "GET") return error(405, "method_not_allowed", method);
      return {200, json{{"status", "ok"}, {"api_version", kApiVersion}}};
    }
    if (rest == std::vector<std::string>{"sessions"}) {
      if (method != "POST") return error(405, "method_not_allowed", method);
      return upload(body);
    }
    if (rest == std::vector<std::string>{"config", "validate"}) {
      if (method != "POST") return error(405, "method_not_allowed", method);
      const auto violations = game::validate_config(json::parse(body).get<game::GameConfig>());
      return {200, json{{"valid", violations.empty()}, {"violations", violations}}};
    }
    if (rest == std::vector<std::string>{"calibrate"}) {
      if (method != "POST") return error(405, "method_not_allowed", method);
      return calibrate(body);
    }
    if (rest.size() >= 3 && rest[0] == "patients") {
      if (method != "GET") return error(405, "method_not_allowed", method);
      const std::string& patient = rest[1];
      if (rest.size() == 3 && rest[2] == "progress") return progress(patient);
      if (rest.size() == 3 && rest[2] == "sessions") {
        return {200, json{{"patient_id", patient}, {"sessions", store_.session_ids(patient)}}};
      }
      if (rest.size() == 4 && rest[2] == "sessions") {
        return {200, analytics::record_to_json(store_.load(patient, rest[3]))};
      }
    }
    return error(404, "not_found", "no route for " + path);
  } catch (const Error& e) {
    return error(status_for(e.kind()), std::string(to_string(e.kind())), e.what());
  } catch (const json::exception& e) {
    return error(400, "structural", std::string("malformed request: ") + e.what());
  }
}

HttpResponse ApiHandler::upload(const std::string& body) const {
  const json envelope = json::parse(body);
  if (!envelope.is_object()) return error(400, "structural", "envelope must be an object");
  if (envelope.value("api_version", 0) != kApiVersion) {
    return error(400, "structural", "unsupported api_version");
  }
  const auto rec = analytics::record_from_json(envelope.at("session"));
  const std::string sum = analytics::checksum(rec);
  if (envelope.at("client_checksum").get<std::string>() != sum) {
    return error(400, "checksum_mismatch", "client_checksum does not match the session content");
  }
  const auto outcome = store_.save(rec);
  const bool created = outcome == analytics::SaveOutcome::created;
  return {created ? 201 : 200, json{{"status", created ? "created" : "duplicate"},
                                     {"patient_id", rec.patient_id},
                                     {"session_id", rec.session_id},
                                     {"checksum", sum}}};
}

HttpResponse ApiHandler::progress(const std::string& patient_id) const {
  if (!store_.has_patient(patient_id)) return error(404, "not_found", "unknown patient " + patient_id);
  return {200, progress_report(store_, patient_id, rules_)};
}

HttpResponse ApiHandler::calibrate(const std::string& body) const {
  const json req = json::parse(body);
  pitch::EngineSettings settings;
  if (req.contains("engine_settings")) settings = req["engine_settings"].get<pitch::EngineSettings>();
  settings.validate_for(settings.sample_rate, static_cast<std::size_t>(settings.frame_size));
  auto samples = decode_samples(req.at("samples").get<std::string>());
  for (auto& s : samples) s = std::isfinite(s) ? std::clamp(s, -1.0, 1.0) : 0.0;
  const auto track = pitch::smooth_track(pitch::analyze_signal(samples, settings), settings.median_window);
  try {
    return {200, json(game::calibrate(track))};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::calibration) throw;
    return error(422, "calibration", e.what());
  }
}

}  // namespace phonic::sync
