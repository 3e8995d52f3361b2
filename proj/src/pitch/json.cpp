// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "pitch/json.hpp"

#include "common/error.hpp"
#include "pitch/mel.hpp"

namespace phonic::pitch {

using nlohmann::json;

void to_json(json& j, const EngineSettings& s) {
  j = json{{"method", std::string(to_string(s.method))},
           {"f_min", s.f_min},
           {"f_max", s.f_max},
           {"voicing_threshold", s.voicing_threshold},
           {"silence_rms_floor", s.silence_rms_floor},
           {"median_window", s.median_window},
           {"sample_rate", s.sample_rate},
           {"frame_size", s.frame_size},
           {"hop_size", s.hop_size}};
}

void from_json(const json& j, EngineSettings& s) {
  if (!j.is_object()) fail(ErrorKind::structural, "engine settings must be an object");
  const EngineSettings d;
  s.method = method_from_string(j.value("method", std::string(to_string(d.method))));
  s.f_min = j.value("f_min", d.f_min);
  s.f_max = j.value("f_max", d.f_max);
  s.voicing_threshold = j.value("voicing_threshold", d.voicing_threshold);
  s.silence_rms_floor = j.value("silence_rms_floor", d.silence_rms_floor);
  s.median_window = j.value("median_window", d.median_window);
  s.sample_rate = j.value("sample_rate", d.sample_rate);
  s.frame_size = j.value("frame_size", d.frame_size);
  s.hop_size = j.value("hop_size", d.hop_size);
}

void to_json(json& j, const PitchEstimate& e) {
  j = json{{"t", e.t_ms},
           {"voiced", e.voiced},
           {"confidence", e.confidence},
           {"f0_hz", e.f0_hz ? json(*e.f0_hz) : json(nullptr)},
           {"mel", e.mel ? json(*e.mel) : json(nullptr)}};
}

void from_json(const json& j, PitchEstimate& e) {
  e = PitchEstimate{};
  e.t_ms = j.at("t").get<double>();
  e.voiced = j.at("voiced").get<bool>();
  e.confidence = j.value("confidence", 0.0);
  if (!e.voiced) return;
  const auto& mel = j.at("mel");
  if (mel.is_null()) fail(ErrorKind::structural, "voiced estimate without mel");
  e.mel = mel.get<double>();
  const auto f0 = j.find("f0_hz");
  e.f0_hz = (f0 != j.end() && !f0->is_null()) ? f0->get<double>() : mel_to_hz(*e.mel);
}

json track_to_json(const PitchTrack& track, bool compact) {
  json estimates = json::array();
  for (const auto& e : track.estimates) {
    if (compact) {
      estimates.push_back({{"t", e.t_ms}, {"mel", e.mel ? json(*e.mel) : json(nullptr)}, {"voiced", e.voiced}});
    } else {
      estimates.push_back(e);
    }
  }
  return json{{"settings", track.settings}, {"estimates", std::move(estimates)}};
}

PitchTrack track_from_json(const json& j) {
  PitchTrack track;
  track.settings = j.at("settings").get<EngineSettings>();
  for (const auto& e : j.at("estimates")) track.estimates.push_back(e.get<PitchEstimate>());
  return track;
}

}  // namespace phonic::pitch
