// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "analytics/record.hpp"

namespace phonic::analytics {

enum class SaveOutcome { created, duplicate };

/// Directory-backed session store:
///
///   <root>/patients/<encoded patient id>/sessions/<session id>.json
///   <root>/patients/<encoded patient id>/index.json
///
/// Each session document is {"checksum": ..., "record": {...}}; the index
/// lists session ids in save order. Files are written to a temporary name,
/// fsynced and renamed into place. Writes for one patient are serialized by
/// an in-process mutex and a lock file; reads take no lock.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  /// Saves a record. An existing id with the same checksum is a no-op
  /// (duplicate); with a different checksum a conflict error. New records
  /// must pass validate_record.
  SaveOutcome save(const SessionRecord& rec);

  /// Loads and verifies one session: checksum and recomputed metrics.
  /// Unknown ids are not_found; failed verification is corruption.
  SessionRecord load(const std::string& patient_id, const std::string& session_id) const;

  /// Stored checksum of a session, or empty if absent.
  std::string stored_checksum(const std::string& patient_id, const std::string& session_id) const;

  bool has_patient(const std::string& patient_id) const;

  /// Session ids in save order; not_found for unknown patients.
  std::vector<std::string> session_ids(const std::string& patient_id) const;

  /// Every session of a patient, verified, ordered by started_at (save order
  /// breaks ties).
  std::vector<SessionRecord> load_patient(const std::string& patient_id) const;

  std::vector<std::string> patients() const;

 private:
  std::filesystem::path patient_dir(const std::string& patient_id) const;
  std::filesystem::path session_path(const std::string& patient_id, const std::string& session_id) const;
  std::mutex& patient_mutex(const std::string& patient_id);

  std::filesystem::path root_;
  std::mutex mutexes_guard_;
  std::map<std::string, std::unique_ptr<std::mutex>> mutexes_;
};

/// Percent-encodes everything outside [A-Za-z0-9_-] (and a leading dot).
std::string encode_path_component(const std::string& raw);
std::string decode_path_component(const std::string& encoded);

}  // namespace phonic::analytics
