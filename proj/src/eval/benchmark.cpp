// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "eval/benchmark.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "common/error.hpp"
#include "pitch/detector.hpp"
#include "pitch/json.hpp"
#include "pitch/smoothing.hpp"

namespace phonic::eval {

using nlohmann::json;

EvalResult score(const pitch::PitchTrack& track, const Truth& truth) {
  const auto& est = track.estimates;
  if (est.size() != truth.size()) {
    fail(ErrorKind::structural, "score: track has " + std::to_string(est.size()) +
                                    " frames but truth has " + std::to_string(truth.size()));
  }
  std::size_t truth_voiced = 0;
  std::size_t gross = 0;
  std::size_t voicing_errors = 0;
  std::size_t fine_frames = 0;
  double fine_cents = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const bool t_voiced = truth[i].has_value();
    if (t_voiced != est[i].voiced) ++voicing_errors;
    if (!t_voiced) continue;
    ++truth_voiced;
    if (!est[i].voiced) continue;
    const double ratio = *est[i].f0_hz / *truth[i];
    if (std::abs(ratio - 1.0) > kGrossErrorThreshold) {
      ++gross;
    } else {
      fine_cents += std::abs(1200.0 * std::log2(ratio));
      ++fine_frames;
    }
  }
  EvalResult r;
  r.method = std::string(pitch::to_string(track.settings.method));
  r.gpe = truth_voiced ? static_cast<double>(gross) / static_cast<double>(truth_voiced) : 0.0;
  r.fpe_cents = fine_frames ? fine_cents / static_cast<double>(fine_frames) : 0.0;
  r.vde = est.empty() ? 0.0 : static_cast<double>(voicing_errors) / static_cast<double>(est.size());
  r.score = r.gpe + r.vde + r.fpe_cents / kFineErrorCentsScale;
  return r;
}

std::vector<EvalResult> run_benchmark(const std::vector<SignalSpec>& signals,
                                      const std::vector<pitch::EngineSettings>& method_settings,
                                      const Framing& framing, bool smooth) {
  if (signals.empty()) fail(ErrorKind::configuration, "benchmark suite has no signals");
  if (method_settings.empty()) fail(ErrorKind::configuration, "benchmark suite has no methods");

  std::vector<Synthesis> synthesized;
  synthesized.reserve(signals.size());
  for (const auto& spec : signals) synthesized.push_back(synthesize(spec, framing));

  std::vector<EvalResult> results;
  for (pitch::EngineSettings settings : method_settings) {
    settings.sample_rate = framing.sample_rate;
    settings.frame_size = framing.frame_size;
    settings.hop_size = framing.hop_size;
    settings.validate();
    EvalResult mean;
    mean.method = std::string(pitch::to_string(settings.method));
    for (const auto& syn : synthesized) {
      pitch::PitchTrack track;
      track.settings = settings;
      for (const auto& frame : syn.frames) track.estimates.push_back(pitch::detect_f0(frame, settings));
      if (smooth) track = pitch::smooth_track(track, settings.median_window);
      const EvalResult r = score(track, syn.truth);
      mean.gpe += r.gpe;
      mean.fpe_cents += r.fpe_cents;
      mean.vde += r.vde;
    }
    const auto n = static_cast<double>(synthesized.size());
    mean.gpe /= n;
    mean.fpe_cents /= n;
    mean.vde /= n;
    mean.score = mean.gpe + mean.vde + mean.fpe_cents / kFineErrorCentsScale;
    results.push_back(mean);
  }
  std::stable_sort(results.begin(), results.end(), [](const EvalResult& a, const EvalResult& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.method < b.method;
  });
  return results;
}

namespace {

json contour_to_json(const std::vector<ContourPoint>& contour) {
  json out = json::array();
  for (const auto& p : contour) out.push_back({{"t", p.t_s}, {"hz", p.hz ? json(*p.hz) : json(nullptr)}});
  return out;
}

SignalSpec signal_from_json(const json& j) {
  SignalSpec s;
  s.name = j.value("name", std::string());
  s.waveform = waveform_from_string(j.at("waveform").get<std::string>());
  for (const auto& p : j.at("f0_contour")) {
    // {"t": s, "hz": f} or the short form [s, f]; a null frequency is silence.
    ContourPoint cp;
    const bool pair = p.is_array();
    if (pair && p.size() != 2) fail(ErrorKind::configuration, "contour pairs need two entries");
    cp.t_s = (pair ? p.at(0) : p.at("t")).get<double>();
    if (const auto& hz = pair ? p.at(1) : p.at("hz"); !hz.is_null()) cp.hz = hz.get<double>();
    s.f0_contour.push_back(cp);
  }
  s.duration_s = j.at("duration_s").get<double>();
  s.jitter_pct = j.value("jitter_pct", 0.0);
  s.shimmer_pct = j.value("shimmer_pct", 0.0);
  if (j.contains("noise_snr_db") && !j.at("noise_snr_db").is_null()) {
    s.noise_snr_db = j.at("noise_snr_db").get<double>();
  }
  s.seed = j.value("seed", std::uint64_t{0});
  s.amplitude = j.value("amplitude", 0.5);
  return s;
}

json signal_to_json(const SignalSpec& s) {
  return json{{"name", s.name},
              {"waveform", std::string(to_string(s.waveform))},
              {"f0_contour", contour_to_json(s.f0_contour)},
              {"duration_s", s.duration_s},
              {"jitter_pct", s.jitter_pct},
              {"shimmer_pct", s.shimmer_pct},
              {"noise_snr_db", s.noise_snr_db ? json(*s.noise_snr_db) : json(nullptr)},
              {"seed", s.seed},
              {"amplitude", s.amplitude}};
}

std::vector<pitch::EngineSettings> all_methods(const pitch::EngineSettings& base) {
  std::vector<pitch::EngineSettings> out;
  for (auto m : pitch::kAllMethods) {
    auto s = base;
    s.method = m;
    out.push_back(s);
  }
  return out;
}

}  // namespace

Suite suite_from_json(const json& j) {
  try {
    Suite suite;
    suite.schema_version = j.at("schema_version").get<int>();
    if (suite.schema_version != kSuiteSchemaVersion) {
      fail(ErrorKind::configuration,
           "unsupported suite schema_version " + std::to_string(suite.schema_version));
    }
    if (auto f = j.find("framing"); f != j.end()) {
      suite.framing.sample_rate = f->value("sample_rate", 44100);
      suite.framing.frame_size = f->value("frame_size", 2048);
      suite.framing.hop_size = f->value("hop_size", 512);
    }
    suite.smooth = j.value("smooth", false);

    pitch::EngineSettings base;
    if (auto d = j.find("defaults"); d != j.end()) base = d->get<pitch::EngineSettings>();
    if (auto m = j.find("methods"); m != j.end()) {
      for (const auto& entry : *m) {
        if (entry.is_string()) {
          auto s = base;
          s.method = pitch::method_from_string(entry.get<std::string>());
          suite.methods.push_back(s);
        } else {
          json merged = base;
          merged.update(entry);
          suite.methods.push_back(merged.get<pitch::EngineSettings>());
        }
      }
    } else {
      suite.methods = all_methods(base);
    }
    for (const auto& s : j.at("signals")) suite.signals.push_back(signal_from_json(s));
    return suite;
  } catch (const json::exception& e) {
    fail(ErrorKind::configuration, std::string("invalid suite file: ") + e.what());
  }
}

json suite_to_json(const Suite& suite) {
  json methods = json::array();
  for (const auto& m : suite.methods) methods.push_back(m);
  json signals = json::array();
  for (const auto& s : suite.signals) signals.push_back(signal_to_json(s));
  return json{{"schema_version", suite.schema_version},
              {"framing",
               {{"sample_rate", suite.framing.sample_rate},
                {"frame_size", suite.framing.frame_size},
                {"hop_size", suite.framing.hop_size}}},
              {"smooth", suite.smooth},
              {"methods", std::move(methods)},
              {"signals", std::move(signals)}};
}

std::vector<EvalResult> run_suite(const Suite& suite) {
  return run_benchmark(suite.signals, suite.methods, suite.framing, suite.smooth);
}

json report_json(const std::vector<EvalResult>& ranking, const Suite& suite) {
  json rows = json::array();
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& r = ranking[i];
    rows.push_back({{"rank", i + 1},
                    {"method", r.method},
                    {"gpe", r.gpe},
                    {"fpe_cents", r.fpe_cents},
                    {"vde", r.vde},
                    {"score", r.score}});
  }
  return json{{"schema_version", 1},
              {"criteria",
               {{"gross_error_threshold", kGrossErrorThreshold},
                {"score", "gpe + vde + fpe_cents / 500"},
                {"fine_error_cents_scale", kFineErrorCentsScale}}},
              {"signals", suite.signals.size()},
              {"smooth", suite.smooth},
              {"ranking", std::move(rows)}};
}

std::string report_text(const std::vector<EvalResult>& ranking, const Suite& suite) {
  std::ostringstream out;
  out << "# pitch estimator benchmark\n"
      << "# gross error: |f0 - truth| / truth > " << kGrossErrorThreshold
      << "; score = gpe + vde + fpe_cents / " << kFineErrorCentsScale << "\n"
      << "# signals: " << suite.signals.size() << ", framing " << suite.framing.frame_size << "/"
      << suite.framing.hop_size << " @ " << suite.framing.sample_rate << " Hz"
      << (suite.smooth ? ", smoothed" : "") << "\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-4s %-10s %8s %10s %8s %8s\n", "rank", "method", "GPE",
                "FPE(c)", "VDE", "score");
  out << line;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const auto& r = ranking[i];
    std::snprintf(line, sizeof line, "%-4zu %-10s %8.4f %10.3f %8.4f %8.4f\n", i + 1,
                  r.method.c_str(), r.gpe, r.fpe_cents, r.vde, r.score);
    out << line;
  }
  return out.str();
}

Suite clean_sine_sweep_suite() {
  Suite suite;
  suite.methods = all_methods(pitch::EngineSettings{});
  constexpr int kPoints = 20;
  for (int i = 0; i < kPoints; ++i) {
    const double hz = 80.0 * std::pow(500.0 / 80.0, static_cast<double>(i) / (kPoints - 1));
    SignalSpec s;
    s.name = "sine-" + std::to_string(i);
    s.waveform = Waveform::sine;
    s.f0_contour = {{0.0, hz}};
    s.duration_s = 0.25;
    s.seed = static_cast<std::uint64_t>(i);
    suite.signals.push_back(s);
  }
  return suite;
}

Suite dysphonic_suite() {
  Suite suite;
  suite.methods = all_methods(pitch::EngineSettings{});
  struct Voice {
    const char* name;
    Waveform waveform;
    std::vector<ContourPoint> contour;
  };
  // Sustained vowels, glides and phrase-like contours with pauses, spanning
  // low male to high female/child ranges.
  const std::vector<Voice> voices = {
      {"low-sustain", Waveform::sawtooth, {{0.0, 110.0}, {1.5, 115.0}}},
      {"male-glide", Waveform::pulse_train, {{0.0, 100.0}, {0.7, 160.0}, {0.75, {}}, {1.0, {}}, {1.05, 140.0}, {1.5, 120.0}}},
      {"female-glide", Waveform::sawtooth, {{0.0, 200.0}, {0.6, 300.0}, {0.65, {}}, {0.9, {}}, {0.95, 260.0}, {1.5, 220.0}}},
      {"high-target", Waveform::pulse_train, {{0.0, 250.0}, {1.0, 380.0}, {1.5, 350.0}}},
      {"phrase", Waveform::sawtooth, {{0.0, {}}, {0.2, {}}, {0.25, 150.0}, {0.8, 180.0}, {0.85, {}}, {1.1, {}}, {1.15, 170.0}, {1.5, 130.0}}},
      {"pulse-phrase", Waveform::pulse_train, {{0.0, 180.0}, {0.5, 230.0}, {0.55, {}}, {0.8, {}}, {0.85, 210.0}, {1.5, 190.0}}},
  };
  std::uint64_t seed = 101;
  for (const auto& v : voices) {
    SignalSpec s;
    s.name = v.name;
    s.waveform = v.waveform;
    s.f0_contour = v.contour;
    s.duration_s = 1.5;
    s.jitter_pct = 3.0;
    s.shimmer_pct = 8.0;
    s.noise_snr_db = 15.0;
    s.seed = seed++;
    suite.signals.push_back(s);
  }
  return suite;
}

}  // namespace phonic::eval
