// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "analytics/progress.hpp"
#include "analytics/record.hpp"
#include "analytics/store.hpp"
#include "common/error.hpp"
#include "eval/benchmark.hpp"
#include "game/engine.hpp"
#include "game/json.hpp"
#include "game/metrics.hpp"
#include "phonic/phonic.h"
#include "pitch/detector.hpp"
#include "pitch/framing.hpp"
#include "pitch/json.hpp"
#include "pitch/mel.hpp"
#include "pitch/smoothing.hpp"
#include "pitch/wav.hpp"
#include "sync/api.hpp"
#include "sync/live.hpp"
#include "sync/server.hpp"

using nlohmann::json;
using phonic::Error;
using phonic::ErrorKind;

struct phn_detector {
  phonic::pitch::EngineSettings settings;
};

struct phn_game {
  phonic::game::GameConfig config;
  phonic::game::Calibration calibration;
  phonic::game::GameState state;
};

struct phn_store {
  explicit phn_store(const std::string& dir) : store(dir), rules(phonic::sync::load_rules(dir)) {}
  phonic::analytics::SessionStore store;
  phonic::analytics::RuleTable rules;
};

struct phn_live {
  explicit phn_live(phonic::analytics::SessionStore& s) : session(s) {}
  phonic::sync::LiveSession session;
};

struct phn_server {
  explicit phn_server(phonic::sync::ServerOptions o) : server(std::move(o)) {}
  phonic::sync::Server server;
};

namespace {

thread_local std::string g_last_error;

struct InvalidArgument {
  const char* what;
};

phn_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return PHN_ERR_DOMAIN;
    case ErrorKind::structural: return PHN_ERR_STRUCTURAL;
    case ErrorKind::configuration: return PHN_ERR_CONFIGURATION;
    case ErrorKind::calibration: return PHN_ERR_CALIBRATION;
    case ErrorKind::state: return PHN_ERR_STATE;
    case ErrorKind::conflict: return PHN_ERR_CONFLICT;
    case ErrorKind::not_found: return PHN_ERR_NOT_FOUND;
    case ErrorKind::corruption: return PHN_ERR_CORRUPTION;
    case ErrorKind::protocol: return PHN_ERR_PROTOCOL;
    case ErrorKind::io: return PHN_ERR_IO;
  }
  return PHN_ERR_INTERNAL;
}

template <class F>
phn_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return PHN_OK;
  } catch (const InvalidArgument& e) {
    g_last_error = e.what;
    return PHN_ERR_INVALID_ARGUMENT;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const json::exception& e) {
    g_last_error = std::string("malformed JSON: ") + e.what();
    return PHN_ERR_STRUCTURAL;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PHN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PHN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return PHN_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw InvalidArgument{what};
}

json parse(const char* text, const char* what) {
  require(text, what);
  return json::parse(text);
}

// Optional JSON argument: NULL or empty means an empty object.
json parse_optional(const char* text) {
  if (text == nullptr || *text == '\0') return json::object();
  return json::parse(text);
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put(char** out, const std::string& s) {
  require(out, "output pointer is null");
  *out = dup(s);
}

json events_to_json(const std::vector<phonic::game::GameEvent>& events) {
  json out = json::array();
  for (const auto& e : events) out.push_back(e);
  return out;
}

phonic::analytics::SessionRecord record_of(const json& j) {
  // A store document wraps the record next to its checksum.
  if (j.is_object() && j.contains("record") && j.contains("checksum")) {
    return phonic::analytics::record_from_json(j.at("record"));
  }
  return phonic::analytics::record_from_json(j);
}

}  // namespace

extern "C" {

const char* phn_version(void) { return "1.0.0"; }

const char* phn_status_name(phn_status status) {
  switch (status) {
    case PHN_OK: return "ok";
    case PHN_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case PHN_ERR_DOMAIN: return "domain";
    case PHN_ERR_STRUCTURAL: return "structural";
    case PHN_ERR_CONFIGURATION: return "configuration";
    case PHN_ERR_CALIBRATION: return "calibration";
    case PHN_ERR_STATE: return "state";
    case PHN_ERR_CONFLICT: return "conflict";
    case PHN_ERR_NOT_FOUND: return "not_found";
    case PHN_ERR_CORRUPTION: return "corruption";
    case PHN_ERR_PROTOCOL: return "protocol";
    case PHN_ERR_IO: return "io";
    case PHN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* phn_last_error(void) { return g_last_error.c_str(); }

void phn_string_free(char* s) { std::free(s); }

phn_status phn_hz_to_mel(double hz, double* mel) {
  return guarded([&] {
    require(mel, "mel is null");
    *mel = phonic::pitch::hz_to_mel(hz);
  });
}

phn_status phn_mel_to_hz(double mel, double* hz) {
  return guarded([&] {
    require(hz, "hz is null");
    *hz = phonic::pitch::mel_to_hz(mel);
  });
}

phn_status phn_detector_create(const char* settings_json, phn_detector** out) {
  return guarded([&] {
    require(out, "out is null");
    auto d = std::make_unique<phn_detector>();
    d->settings = parse_optional(settings_json).get<phonic::pitch::EngineSettings>();
    d->settings.validate();
    *out = d.release();
  });
}

void phn_detector_destroy(phn_detector* detector) { delete detector; }

phn_status phn_detector_process(phn_detector* detector, const float* samples, size_t count, int sample_rate,
                                double t_start_ms, char** estimate_json) {
  return guarded([&] {
    require(detector, "detector is null");
    if (count > 0) require(samples, "samples is null");
    phonic::pitch::AudioFrame frame;
    frame.samples.assign(samples, samples + count);
    frame.sample_rate = sample_rate;
    frame.t_start_ms = t_start_ms;
    put(estimate_json, json(phonic::pitch::detect_f0(frame, detector->settings)).dump());
  });
}

phn_status phn_analyze_wav(const char* path, const char* settings_json, int smooth, char** track_json) {
  return guarded([&] {
    require(path, "path is null");
    auto settings = parse_optional(settings_json).get<phonic::pitch::EngineSettings>();
    const auto pcm = phonic::pitch::read_wav(path);
    settings.sample_rate = pcm.sample_rate;
    auto track = phonic::pitch::analyze_signal(pcm.samples, settings);
    if (smooth != 0) track = phonic::pitch::smooth_track(track, settings.median_window);
    put(track_json, phonic::pitch::track_to_json(track).dump());
  });
}

phn_status phn_evaluate_suite(const char* suite_json, char** report_json, char** report_text) {
  return guarded([&] {
    const auto suite = phonic::eval::suite_from_json(parse(suite_json, "suite_json is null"));
    const auto ranking = phonic::eval::run_suite(suite);
    if (report_json != nullptr) *report_json = dup(phonic::eval::report_json(ranking, suite).dump(2));
    if (report_text != nullptr) *report_text = dup(phonic::eval::report_text(ranking, suite));
  });
}

phn_status phn_suite_preset(const char* name, char** suite_json) {
  return guarded([&] {
    require(name, "name is null");
    const std::string n = name;
    phonic::eval::Suite suite;
    if (n == "clean-sines") {
      suite = phonic::eval::clean_sine_sweep_suite();
    } else if (n == "dysphonic") {
      suite = phonic::eval::dysphonic_suite();
    } else {
      phonic::fail(ErrorKind::not_found, "unknown preset '" + n + "'");
    }
    put(suite_json, phonic::eval::suite_to_json(suite).dump(2));
  });
}

phn_status phn_validate_config(const char* config_json, char** violations_json) {
  return guarded([&] {
    const auto cfg = parse(config_json, "config_json is null").get<phonic::game::GameConfig>();
    put(violations_json, json(phonic::game::validate_config(cfg)).dump());
  });
}

phn_status phn_calibrate(const char* track_json, char** calibration_json) {
  return guarded([&] {
    const auto track = phonic::pitch::track_from_json(parse(track_json, "track_json is null"));
    put(calibration_json, json(phonic::game::calibrate(track)).dump());
  });
}

phn_status phn_game_create(const char* config_json, const char* calibration_json, phn_game** out) {
  return guarded([&] {
    require(out, "out is null");
    auto g = std::make_unique<phn_game>();
    g->config = parse(config_json, "config_json is null").get<phonic::game::GameConfig>();
    g->calibration = parse(calibration_json, "calibration_json is null").get<phonic::game::Calibration>();
    g->calibration.validate();
    g->state = phonic::game::new_game(g->config);
    *out = g.release();
  });
}

void phn_game_destroy(phn_game* game) { delete game; }

phn_status phn_game_step(phn_game* game, const char* estimate_json, double dt_ms, char** events_json) {
  return guarded([&] {
    require(game, "game is null");
    require(events_json, "events_json is null");
    const auto est = parse(estimate_json, "estimate_json is null").get<phonic::pitch::PitchEstimate>();
    auto r = phonic::game::step(game->state, est, game->config, game->calibration, dt_ms);
    const std::string events = events_to_json(r.events).dump();
    game->state = std::move(r.state);
    *events_json = dup(events);
  });
}

phn_status phn_game_end(phn_game* game, char** events_json) {
  return guarded([&] {
    require(game, "game is null");
    require(events_json, "events_json is null");
    auto r = phonic::game::end_session(game->state);
    const std::string events = events_to_json(r.events).dump();
    game->state = std::move(r.state);
    *events_json = dup(events);
  });
}

phn_status phn_game_state(const phn_game* game, char** state_json) {
  return guarded([&] {
    require(game, "game is null");
    put(state_json, phonic::game::state_to_json(game->state).dump());
  });
}

phn_status phn_game_hash(const phn_game* game, uint64_t* hash) {
  return guarded([&] {
    require(game, "game is null");
    require(hash, "hash is null");
    *hash = phonic::game::state_hash(game->state);
  });
}

int phn_game_finished(const phn_game* game) { return game != nullptr && game->state.finished ? 1 : 0; }

phn_status phn_compute_metrics(const char* events_json, const char* track_json, const char* config_json,
                               const char* calibration_json, char** metrics_json) {
  return guarded([&] {
    const auto events =
        parse(events_json, "events_json is null").get<std::vector<phonic::game::GameEvent>>();
    const auto track = phonic::pitch::track_from_json(parse(track_json, "track_json is null"));
    const auto cfg = parse(config_json, "config_json is null").get<phonic::game::GameConfig>();
    const auto cal = parse(calibration_json, "calibration_json is null").get<phonic::game::Calibration>();
    put(metrics_json, json(phonic::game::compute_metrics(events, track, cfg, cal)).dump());
  });
}

phn_status phn_record_checksum(const char* record_json, char** checksum) {
  return guarded([&] {
    const auto rec = record_of(parse(record_json, "record_json is null"));
    put(checksum, phonic::analytics::checksum(rec));
  });
}

phn_status phn_replay_session(const char* record_json, char** result_json) {
  return guarded([&] {
    const json doc = parse(record_json, "record_json is null");
    const auto rec = record_of(doc);
    const auto sim = phonic::game::simulate(rec.config, rec.calibration, rec.track);
    const bool events_match = sim.events == rec.events;
    const auto metrics = phonic::game::compute_metrics(sim.events, rec.track, rec.config, rec.calibration);
    const bool metrics_match = metrics == rec.metrics;
    bool checksum_match = true;
    if (doc.contains("checksum")) {
      checksum_match = doc.at("checksum").get<std::string>() == phonic::analytics::checksum(rec);
    }
    json out;
    out["session_id"] = rec.session_id;
    out["patient_id"] = rec.patient_id;
    out["events"] = events_to_json(sim.events);
    out["metrics"] = metrics;
    out["events_match"] = events_match;
    out["metrics_match"] = metrics_match;
    out["checksum_match"] = checksum_match;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(phonic::game::state_hash(sim.state)));
    out["state_hash"] = hash;
    out["verified"] = events_match && metrics_match && checksum_match;
    put(result_json, out.dump());
  });
}

phn_status phn_store_open(const char* data_dir, phn_store** out) {
  return guarded([&] {
    require(data_dir, "data_dir is null");
    require(out, "out is null");
    *out = new phn_store(data_dir);
  });
}

void phn_store_close(phn_store* store) { delete store; }

phn_status phn_store_save(phn_store* store, const char* record_json, int* created) {
  return guarded([&] {
    require(store, "store is null");
    const auto rec = record_of(parse(record_json, "record_json is null"));
    const auto outcome = store->store.save(rec);
    if (created != nullptr) *created = outcome == phonic::analytics::SaveOutcome::created ? 1 : 0;
  });
}

phn_status phn_store_load(phn_store* store, const char* patient_id, const char* session_id, char** record_json) {
  return guarded([&] {
    require(store, "store is null");
    require(patient_id, "patient_id is null");
    require(session_id, "session_id is null");
    const auto rec = store->store.load(patient_id, session_id);
    put(record_json, phonic::analytics::record_to_json(rec).dump());
  });
}

phn_status phn_store_report(phn_store* store, const char* patient_id, int as_text, char** report) {
  return guarded([&] {
    require(store, "store is null");
    require(patient_id, "patient_id is null");
    if (as_text != 0) {
      const auto sessions = store->store.load_patient(patient_id);
      const auto rep = phonic::analytics::analyze_progress(sessions, store->rules);
      put(report, phonic::analytics::report_text(rep));
    } else {
      put(report, phonic::sync::progress_report(store->store, patient_id, store->rules).dump(2));
    }
  });
}

phn_status phn_live_create(phn_store* store, phn_live** out) {
  return guarded([&] {
    require(store, "store is null");
    require(out, "out is null");
    *out = new phn_live(store->store);
  });
}

void phn_live_destroy(phn_live* live) { delete live; }

phn_status phn_live_handle(phn_live* live, const char* message_json, char** replies_json) {
  return guarded([&] {
    require(live, "live is null");
    require(replies_json, "replies_json is null");
    const json message = parse(message_json, "message_json is null");
    json replies = json::array();
    for (auto& r : live->session.handle(message)) replies.push_back(std::move(r));
    *replies_json = dup(replies.dump());
  });
}

int phn_live_closed(const phn_live* live) { return live != nullptr && live->session.closed() ? 1 : 0; }

phn_status phn_server_create(const char* options_json, phn_server** out) {
  return guarded([&] {
    require(out, "out is null");
    auto opts = phonic::sync::options_from_env();
    const json j = parse_optional(options_json);
    if (j.contains("data_dir")) opts.data_dir = j.at("data_dir").get<std::string>();
    if (j.contains("bind")) opts.bind_address = j.at("bind").get<std::string>();
    if (j.contains("port")) opts.port = j.at("port").get<std::uint16_t>();
    if (j.contains("token")) opts.token = j.at("token").get<std::string>();
    *out = new phn_server(std::move(opts));
  });
}

void phn_server_destroy(phn_server* server) { delete server; }

phn_status phn_server_start(phn_server* server) {
  return guarded([&] {
    require(server, "server is null");
    server->server.start();
  });
}

phn_status phn_server_stop(phn_server* server) {
  return guarded([&] {
    require(server, "server is null");
    server->server.stop();
  });
}

phn_status phn_server_port(const phn_server* server, uint16_t* port) {
  return guarded([&] {
    require(server, "server is null");
    require(port, "port is null");
    *port = server->server.port();
  });
}

}  // extern "C"
