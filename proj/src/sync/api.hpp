// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>
#include "analytics/progress.hpp"
#include "analytics/store.hpp"

namespace phonic::sync {

inline constexpr int kApiVersion = 1;

struct HttpResponse {
  int status = 200;
  nlohmann::json body;
};

/// The HTTP API, independent of the transport.
///
///   GET  /api/v1/health
///   POST /api/v1/sessions                  UploadEnvelope
///          {api_version: 1, client_checksum, session: SessionRecord}
///          201 created, 200 duplicate, 409 conflict, 400 invalid
///   GET  /api/v1/patients/{id}/progress    ProgressReport, 404 if unknown
///   GET  /api/v1/patients/{id}/sessions    stored session ids
///   GET  /api/v1/patients/{id}/sessions/{session_id}
///   POST /api/v1/config/validate           GameConfig -> {valid, violations}
///   POST /api/v1/calibrate                 {engine_settings?, samples}
///          -> Calibration, 422 when the sweep is unusable
///
/// With a non-empty token every request must carry
/// "Authorization: Bearer <token>"; otherwise 401.
class ApiHandler {
 public:
  ApiHandler(analytics::SessionStore& store, analytics::RuleTable rules, std::string token);

  HttpResponse handle(const std::string& method, const std::string& target, const std::string& body,
                      const std::string& authorization) const;

  /// Checks a bearer header (or a raw token, as sent in a query string).
  bool authorized(const std::string& authorization) const;
  const std::string& token() const noexcept { return token_; }

  analytics::SessionStore& store() const noexcept { return store_; }
  const analytics::RuleTable& rules() const noexcept { return rules_; }

 private:
  HttpResponse upload(const std::string& body) const;
  HttpResponse progress(const std::string& patient_id) const;
  HttpResponse calibrate(const std::string& body) const;

  analytics::SessionStore& store_;
  analytics::RuleTable rules_;
  std::string token_;
};

/// Progress report over every stored session of a patient; not_found for an
/// unknown patient. Shared by the server and the offline report command.
nlohmann::json progress_report(const analytics::SessionStore& store, const std::string& patient_id,
                               const analytics::RuleTable& rules);

/// <data_dir>/rules.json when present, else the built-in table.
analytics::RuleTable load_rules(const std::string& data_dir);

std::string percent_decode(const std::string& s);

}  // namespace phonic::sync
