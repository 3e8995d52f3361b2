// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "analytics/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/error.hpp"

namespace phonic::analytics {

namespace fs = std::filesystem;
using nlohmann::json;

std::string encode_path_component(const std::string& raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    const bool plain = std::isalnum(c) || c == '_' || c == '-' || (c == '.' && i > 0);
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::string decode_path_component(const std::string& encoded) {
  std::string out;
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] == '%' && i + 2 < encoded.size()) {
      out.push_back(static_cast<char>(std::stoi(encoded.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(encoded[i]);
    }
  }
  return out;
}

namespace {

[[noreturn]] void io_fail(const std::string& what, const fs::path& path) {
  fail(ErrorKind::io, what + " " + path.string() + ": " + std::strerror(errno));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::not_found, "no such file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

// Durable replace: temp file, fsync, rename, fsync the directory.
void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) io_fail("cannot create", tmp);
  std::size_t done = 0;
  while (done < content.size()) {
    const auto n = ::write(fd, content.data() + done, content.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      io_fail("cannot write", tmp);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_fail("cannot fsync", tmp);
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path.c_str()) != 0) io_fail("cannot rename", tmp);
  fsync_dir(path.parent_path());
}

class LockFile {
 public:
  explicit LockFile(const fs::path& path) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
    if (fd_ < 0) io_fail("cannot open lock", path);
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        io_fail("cannot lock", path);
      }
    }
  }
  ~LockFile() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  int fd_ = -1;
};

std::vector<std::string> read_index(const fs::path& dir) {
  const fs::path path = dir / "index.json";
  if (!fs::exists(path)) return {};
  try {
    return json::parse(read_file(path)).at("sessions").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail(ErrorKind::corruption, "unreadable index " + path.string() + ": " + e.what());
  }
}

void write_index(const fs::path& dir, const std::string& patient_id, const std::vector<std::string>& ids) {
  write_atomic(dir / "index.json", json{{"patient_id", patient_id}, {"sessions", ids}}.dump());
}

// started_at sort key: whole seconds text, then the fraction as a number.
std::pair<std::string, double> time_key(const std::string& ts) {
  const std::string head = ts.substr(0, std::min<std::size_t>(19, ts.size()));
  double frac = 0.0;
  if (ts.size() > 20 && ts[19] == '.') frac = std::stod("0" + ts.substr(19, ts.size() - 20));
  return {head, frac};
}

}  // namespace

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "patients", ec);
  if (ec) fail(ErrorKind::io, "cannot create store at " + root_.string() + ": " + ec.message());
}

fs::path SessionStore::patient_dir(const std::string& patient_id) const {
  if (patient_id.empty()) fail(ErrorKind::structural, "empty patient_id");
  return root_ / "patients" / encode_path_component(patient_id);
}

fs::path SessionStore::session_path(const std::string& patient_id, const std::string& session_id) const {
  if (!is_valid_session_id(session_id)) fail(ErrorKind::structural, "invalid session_id '" + session_id + "'");
  return patient_dir(patient_id) / "sessions" / (session_id + ".json");
}

std::mutex& SessionStore::patient_mutex(const std::string& patient_id) {
  std::lock_guard guard(mutexes_guard_);
  auto& slot = mutexes_[patient_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::string SessionStore::stored_checksum(const std::string& patient_id, const std::string& session_id) const {
  const fs::path path = session_path(patient_id, session_id);
  if (!fs::exists(path)) return {};
  try {
    return json::parse(read_file(path)).at("checksum").get<std::string>();
  } catch (const json::exception& e) {
    fail(ErrorKind::corruption, "unreadable session " + path.string() + ": " + e.what());
  }
}

SaveOutcome SessionStore::save(const SessionRecord& rec) {
  const fs::path path = session_path(rec.patient_id, rec.session_id);
  const std::string sum = checksum(rec);

  std::lock_guard guard(patient_mutex(rec.patient_id));
  const fs::path dir = patient_dir(rec.patient_id);
  fs::create_directories(dir / "sessions");
  LockFile lock(dir / ".lock");

  auto ids = read_index(dir);
  const bool indexed = std::find(ids.begin(), ids.end(), rec.session_id) != ids.end();
  if (const std::string existing = stored_checksum(rec.patient_id, rec.session_id); !existing.empty()) {
    if (existing != sum) {
      fail(ErrorKind::conflict, "session " + rec.session_id + " already stored with different content");
    }
    if (!indexed) {  // an earlier save stopped between the two writes
      ids.push_back(rec.session_id);
      write_index(dir, rec.patient_id, ids);
    }
    return SaveOutcome::duplicate;
  }

  validate_record(rec);
  write_atomic(path, json{{"checksum", sum}, {"record", record_to_json(rec)}}.dump());
  if (!indexed) ids.push_back(rec.session_id);
  write_index(dir, rec.patient_id, ids);
  return SaveOutcome::created;
}

SessionRecord SessionStore::load(const std::string& patient_id, const std::string& session_id) const {
  const fs::path path = session_path(patient_id, session_id);
  if (!fs::exists(path)) {
    fail(ErrorKind::not_found, "no session " + session_id + " for patient " + patient_id);
  }
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail(ErrorKind::corruption, "unreadable session " + path.string() + ": " + e.what());
  }
  SessionRecord rec;
  try {
    rec = record_from_json(doc.at("record"));
    const std::string stored = doc.at("checksum").get<std::string>();
    if (checksum(rec) != stored) fail(ErrorKind::corruption, "checksum mismatch");
    validate_record(rec);
  } catch (const json::exception& e) {
    fail(ErrorKind::corruption, "session " + path.string() + ": " + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::corruption, "session " + path.string() + " failed verification: " + e.what());
  }
  if (rec.patient_id != patient_id || rec.session_id != session_id) {
    fail(ErrorKind::corruption, "session " + path.string() + " is filed under the wrong identity");
  }
  return rec;
}

bool SessionStore::has_patient(const std::string& patient_id) const {
  return !patient_id.empty() && fs::exists(patient_dir(patient_id) / "index.json");
}

std::vector<std::string> SessionStore::session_ids(const std::string& patient_id) const {
  if (!has_patient(patient_id)) fail(ErrorKind::not_found, "unknown patient " + patient_id);
  return read_index(patient_dir(patient_id));
}

std::vector<SessionRecord> SessionStore::load_patient(const std::string& patient_id) const {
  std::vector<SessionRecord> out;
  for (const auto& id : session_ids(patient_id)) out.push_back(load(patient_id, id));
  std::stable_sort(out.begin(), out.end(), [](const SessionRecord& a, const SessionRecord& b) {
    return time_key(a.started_at) < time_key(b.started_at);
  });
  return out;
}

std::vector<std::string> SessionStore::patients() const {
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root_ / "patients")) {
    if (entry.is_directory() && fs::exists(entry.path() / "index.json")) {
      out.push_back(decode_path_component(entry.path().filename().string()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace phonic::analytics
