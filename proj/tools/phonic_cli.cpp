// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the engine only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include "phonic/phonic.h"

namespace {

using nlohmann::json;

constexpr int kExitFailure = 1;
constexpr int kExitMismatch = 3;

struct ApiFailure : std::runtime_error {
  ApiFailure(phn_status s, const std::string& msg) : std::runtime_error(msg), status(s) {}
  phn_status status;
};

void check(phn_status s) {
  if (s != PHN_OK) throw ApiFailure(s, phn_last_error());
}

// Owns a string returned by the library.
struct Owned {
  char* ptr = nullptr;
  ~Owned() { phn_string_free(ptr); }
  std::string str() const { return ptr != nullptr ? ptr : ""; }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out.flush()) throw std::runtime_error("cannot write " + path);
}

std::string default_data_dir() {
  const char* env = std::getenv("PHONIC_DATA_DIR");
  return env != nullptr && *env != '\0' ? env : "phonic-data";
}

int cmd_evaluate(const std::string& suite_path, const std::string& out_path, bool quiet) {
  const std::string suite = read_file(suite_path);
  Owned report_json, report_text;
  check(phn_evaluate_suite(suite.c_str(), &report_json.ptr, &report_text.ptr));
  write_file(out_path, report_json.str() + "\n");
  write_file(out_path + ".txt", report_text.str());
  if (!quiet) std::cout << report_text.str();
  return 0;
}

int cmd_replay(const std::string& session_path, bool print_events) {
  const std::string doc = read_file(session_path);
  Owned result;
  check(phn_replay_session(doc.c_str(), &result.ptr));
  const json r = json::parse(result.str());
  if (print_events) {
    std::cout << r.at("events").dump(2) << "\n";
  }
  std::cout << "session " << r.at("session_id").get<std::string>() << " (patient "
            << r.at("patient_id").get<std::string>() << ")\n"
            << "  events   " << (r.at("events_match").get<bool>() ? "match" : "MISMATCH") << " ("
            << r.at("events").size() << ")\n"
            << "  metrics  " << (r.at("metrics_match").get<bool>() ? "match" : "MISMATCH") << "\n"
            << "  checksum " << (r.at("checksum_match").get<bool>() ? "match" : "MISMATCH") << "\n"
            << "  state    " << r.at("state_hash").get<std::string>() << "\n";
  return r.at("verified").get<bool>() ? 0 : kExitMismatch;
}

int cmd_report(const std::string& data_dir, const std::string& patient, bool text) {
  phn_store* store = nullptr;
  check(phn_store_open(data_dir.c_str(), &store));
  std::unique_ptr<phn_store, decltype(&phn_store_close)> guard(store, phn_store_close);
  Owned report;
  check(phn_store_report(store, patient.c_str(), text ? 1 : 0, &report.ptr));
  std::cout << report.str();
  if (!text) std::cout << "\n";
  return 0;
}

int cmd_serve(const std::string& options) {
  // Block the termination signals before the server spawns threads so that
  // only sigwait below sees them.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  phn_server* server = nullptr;
  check(phn_server_create(options.c_str(), &server));
  std::unique_ptr<phn_server, decltype(&phn_server_destroy)> guard(server, phn_server_destroy);
  check(phn_server_start(server));
  uint16_t port = 0;
  check(phn_server_port(server, &port));
  std::cout << "listening on port " << port << std::endl;

  int sig = 0;
  sigwait(&set, &sig);
  check(phn_server_stop(server));
  std::cout << "stopped" << std::endl;
  return 0;
}

int cmd_detect(const std::string& wav, const std::string& settings, bool smooth) {
  std::string settings_json = settings.empty() ? "" : read_file(settings);
  Owned track;
  check(phn_analyze_wav(wav.c_str(), settings_json.c_str(), smooth ? 1 : 0, &track.ptr));
  std::cout << json::parse(track.str()).dump(2) << "\n";
  return 0;
}

int cmd_suite(const std::string& preset) {
  Owned suite;
  check(phn_suite_preset(preset.c_str(), &suite.ptr));
  std::cout << suite.str() << "\n";
  return 0;
}

int cmd_validate_config(const std::string& path) {
  json doc = json::parse(read_file(path));
  // Level files wrap the config.
  if (doc.contains("config")) doc = doc.at("config");
  Owned violations;
  check(phn_validate_config(doc.dump().c_str(), &violations.ptr));
  const json v = json::parse(violations.str());
  for (const auto& item : v) {
    std::cout << item.at("field").get<std::string>() << ": " << item.at("message").get<std::string>() << "\n";
  }
  if (v.empty()) std::cout << "valid\n";
  return v.empty() ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phonic voice rehabilitation tools"};
  app.set_version_flag("--version", std::string(phn_version()));
  app.require_subcommand(1);

  std::string suite_path, out_path;
  bool quiet = false;
  auto* evaluate = app.add_subcommand("evaluate", "Benchmark every pitch method on a signal suite");
  evaluate->add_option("--suite", suite_path, "Suite JSON file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", out_path, "Report JSON path (the table goes to <out>.txt)")->required();
  evaluate->add_flag("--quiet", quiet, "Do not print the table");

  std::string session_path;
  bool print_events = false;
  auto* replay = app.add_subcommand("replay", "Re-simulate a stored session and verify its event log");
  replay->add_option("--session", session_path, "Session JSON file")->required()->check(CLI::ExistingFile);
  replay->add_flag("--events", print_events, "Print the replayed events");

  std::string patient;
  std::string data_dir = default_data_dir();
  bool text = false;
  auto* report = app.add_subcommand("report", "Print a patient's progress report");
  report->add_option("--patient", patient, "Patient id")->required();
  report->add_option("--data-dir", data_dir, "Session store root (default $PHONIC_DATA_DIR or ./phonic-data)");
  report->add_flag("--text", text, "Human-readable output instead of JSON");

  std::string serve_dir, bind, token;
  int port = -1;
  auto* serve = app.add_subcommand("serve", "Run the HTTP and live streaming server");
  serve->add_option("--data-dir", serve_dir, "Session store root");
  serve->add_option("--bind", bind, "Listen address");
  serve->add_option("--port", port, "Listen port, 0 for any")->check(CLI::Range(0, 65535));
  serve->add_option("--token", token, "Bearer token required by the API");

  std::string wav, settings;
  bool smooth = false;
  auto* detect = app.add_subcommand("detect", "Pitch-track a 16-bit mono WAV file");
  detect->add_option("--wav", wav, "Input WAV")->required()->check(CLI::ExistingFile);
  detect->add_option("--settings", settings, "Engine settings JSON")->check(CLI::ExistingFile);
  detect->add_flag("--smooth", smooth, "Apply median smoothing");

  std::string preset;
  auto* suite = app.add_subcommand("suite", "Print a built-in benchmark suite");
  suite->add_option("--preset", preset, "clean-sines or dysphonic")->required();

  std::string config_path;
  auto* validate = app.add_subcommand("validate-config", "Check a game config or level file");
  validate->add_option("--config", config_path, "Config or level JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*evaluate) return cmd_evaluate(suite_path, out_path, quiet);
    if (*replay) return cmd_replay(session_path, print_events);
    if (*report) return cmd_report(data_dir, patient, text);
    if (*serve) {
      json options = json::object();
      if (!serve_dir.empty()) options["data_dir"] = serve_dir;
      if (!bind.empty()) options["bind"] = bind;
      if (port >= 0) options["port"] = port;
      if (!token.empty()) options["token"] = token;
      return cmd_serve(options.dump());
    }
    if (*detect) return cmd_detect(wav, settings, smooth);
    if (*suite) return cmd_suite(preset);
    if (*validate) return cmd_validate_config(config_path);
  } catch (const ApiFailure& e) {
    std::cerr << "error (" << phn_status_name(e.status) << "): " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
