/*
 * Copyright 2026 The Phonic Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the phonic library: pitch tracking, estimator benchmark,
 * pitch-controlled game, session storage and analytics, and the sync server.
 *
 * Conventions:
 *   - Every fallible call returns a phn_status; PHN_OK is 0. On failure
 *     phn_last_error() describes the problem (per thread, valid until the
 *     next call on that thread).
 *   - Structured values cross the boundary as UTF-8 JSON strings. Strings
 *     returned through char** are owned by the caller; release them with
 *     phn_string_free().
 *   - Handles are opaque. A handle may be used from one thread at a time;
 *     distinct handles are independent. phn_server and phn_store handles
 *     are internally synchronized.
 */
#ifndef PHONIC_PHONIC_H
#define PHONIC_PHONIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PHN_API __declspec(dllexport)
#else
#define PHN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum phn_status {
  PHN_OK = 0,
  PHN_ERR_INVALID_ARGUMENT = 1, /* null pointer or unusable argument */
  PHN_ERR_DOMAIN = 2,
  PHN_ERR_STRUCTURAL = 3,       /* malformed input data */
  PHN_ERR_CONFIGURATION = 4,
  PHN_ERR_CALIBRATION = 5,
  PHN_ERR_STATE = 6,
  PHN_ERR_CONFLICT = 7,
  PHN_ERR_NOT_FOUND = 8,
  PHN_ERR_CORRUPTION = 9,
  PHN_ERR_PROTOCOL = 10,
  PHN_ERR_IO = 11,
  PHN_ERR_INTERNAL = 12
} phn_status;

PHN_API const char* phn_version(void);
PHN_API const char* phn_status_name(phn_status status);
PHN_API const char* phn_last_error(void);
PHN_API void phn_string_free(char* s);

/* ---- Mel scale: mel = 2595 log10(1 + hz / 700) ---- */
PHN_API phn_status phn_hz_to_mel(double hz, double* mel);
PHN_API phn_status phn_mel_to_hz(double mel, double* hz);

/* ---- Pitch detection ---- */
typedef struct phn_detector phn_detector;

/* settings_json: engine settings object, NULL or "{}" for defaults. */
PHN_API phn_status phn_detector_create(const char* settings_json, phn_detector** out);
PHN_API void phn_detector_destroy(phn_detector* detector);
/* One frame; estimate_json receives {t, voiced, confidence, f0_hz, mel}. */
PHN_API phn_status phn_detector_process(phn_detector* detector, const float* samples, size_t count,
                                        int sample_rate, double t_start_ms, char** estimate_json);
/* Frames a 16-bit mono WAV file and returns the (optionally smoothed) track. */
PHN_API phn_status phn_analyze_wav(const char* path, const char* settings_json, int smooth,
                                   char** track_json);

/* ---- Estimator benchmark ---- */
/* Runs a suite document; either output may be NULL. */
PHN_API phn_status phn_evaluate_suite(const char* suite_json, char** report_json, char** report_text);
/* name: "clean-sines" or "dysphonic". */
PHN_API phn_status phn_suite_preset(const char* name, char** suite_json);

/* ---- Game ---- */
/* violations_json receives [{field, message}, ...]; empty when valid. */
PHN_API phn_status phn_validate_config(const char* config_json, char** violations_json);
PHN_API phn_status phn_calibrate(const char* track_json, char** calibration_json);

typedef struct phn_game phn_game;

PHN_API phn_status phn_game_create(const char* config_json, const char* calibration_json, phn_game** out);
PHN_API void phn_game_destroy(phn_game* game);
/* Advances one hop with a pitch estimate; events_json receives the events. */
PHN_API phn_status phn_game_step(phn_game* game, const char* estimate_json, double dt_ms, char** events_json);
/* Ends the session early (SESSION_END at the current clock). */
PHN_API phn_status phn_game_end(phn_game* game, char** events_json);
PHN_API phn_status phn_game_state(const phn_game* game, char** state_json);
PHN_API phn_status phn_game_hash(const phn_game* game, uint64_t* hash);
PHN_API int phn_game_finished(const phn_game* game);
PHN_API phn_status phn_compute_metrics(const char* events_json, const char* track_json, const char* config_json,
                                       const char* calibration_json, char** metrics_json);

/* ---- Sessions ---- */
/* Lower-case hex SHA-256 of the record's canonical serialization. */
PHN_API phn_status phn_record_checksum(const char* record_json, char** checksum);
/* Re-simulates a stored record (or a store document {checksum, record}) and
 * compares events and metrics. result_json:
 * {session_id, patient_id, events, events_match, metrics_match,
 *  checksum_match, state_hash, verified}. A mismatch is not an error; read
 * "verified". */
PHN_API phn_status phn_replay_session(const char* record_json, char** result_json);

typedef struct phn_store phn_store;

PHN_API phn_status phn_store_open(const char* data_dir, phn_store** out);
PHN_API void phn_store_close(phn_store* store);
/* created receives 1 for a new session, 0 for an identical resend. */
PHN_API phn_status phn_store_save(phn_store* store, const char* record_json, int* created);
PHN_API phn_status phn_store_load(phn_store* store, const char* patient_id, const char* session_id,
                                  char** record_json);
/* Progress report over all sessions of a patient, as JSON or a text table. */
PHN_API phn_status phn_store_report(phn_store* store, const char* patient_id, int as_text, char** report);

/* ---- Live sessions without a network ---- */
typedef struct phn_live phn_live;

PHN_API phn_status phn_live_create(phn_store* store, phn_live** out);
PHN_API void phn_live_destroy(phn_live* live);
/* Handles one client message; replies_json receives an array of replies. */
PHN_API phn_status phn_live_handle(phn_live* live, const char* message_json, char** replies_json);
PHN_API int phn_live_closed(const phn_live* live);

/* ---- Server ---- */
typedef struct phn_server phn_server;

/* options_json: {data_dir, bind, port, token}; absent keys fall back to
 * PHONIC_DATA_DIR / PHONIC_BIND / PHONIC_TOKEN, then to the defaults
 * (./phonic-data, 127.0.0.1:8080, no token). */
PHN_API phn_status phn_server_create(const char* options_json, phn_server** out);
PHN_API void phn_server_destroy(phn_server* server);
PHN_API phn_status phn_server_start(phn_server* server);
PHN_API phn_status phn_server_stop(phn_server* server);
PHN_API phn_status phn_server_port(const phn_server* server, uint16_t* port);

#ifdef __cplusplus
}
#endif

#endif /* PHONIC_PHONIC_H */
