// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "pitch/types.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "common/error.hpp"
#include "pitch/mel.hpp"

namespace phonic::pitch {

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::acf: return "ACF";
    case Method::amdf: return "AMDF";
    case Method::yin: return "YIN";
    case Method::mpm: return "MPM";
    case Method::cepstrum: return "CEPSTRUM";
    case Method::hps: return "HPS";
    case Method::shs: return "SHS";
  }
  return "?";
}

Method method_from_string(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Method m : kAllMethods) {
    if (to_string(m) == upper) return m;
  }
  fail(ErrorKind::configuration, "unknown pitch method '" + std::string(name) + "'");
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void AudioFrame::validate() const {
  const auto n = samples.size();
  if (!is_power_of_two(n) || n < 512 || n > 8192) {
    fail(ErrorKind::structural,
         "frame length must be a power of two in [512, 8192], got " + std::to_string(n));
  }
  if (sample_rate <= 0) {
    fail(ErrorKind::structural, "frame sample_rate must be positive");
  }
  if (!(t_start_ms >= 0.0)) {
    fail(ErrorKind::structural, "frame t_start must be non-negative");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(samples[i] >= -1.0 && samples[i] <= 1.0)) {
      fail(ErrorKind::structural, "sample " + std::to_string(i) + " outside [-1, 1]");
    }
  }
}

PitchEstimate PitchEstimate::unvoiced(double t_ms, double confidence) {
  PitchEstimate e;
  e.t_ms = t_ms;
  e.confidence = confidence;
  return e;
}

PitchEstimate PitchEstimate::voiced_at(double t_ms, double f0_hz, double confidence) {
  PitchEstimate e;
  e.t_ms = t_ms;
  e.f0_hz = f0_hz;
  e.mel = hz_to_mel(f0_hz);
  e.confidence = confidence;
  e.voiced = true;
  return e;
}

PitchEstimate PitchEstimate::voiced_mel(double t_ms, double mel, double confidence) {
  PitchEstimate e;
  e.t_ms = t_ms;
  e.mel = mel;
  e.f0_hz = mel_to_hz(mel);
  e.confidence = confidence;
  e.voiced = true;
  return e;
}

void EngineSettings::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::configuration, what); };
  if (!(f_min > 0.0)) bad("f_min must be > 0");
  if (!(f_max > f_min)) bad("f_max must be > f_min");
  if (!(voicing_threshold > 0.0 && voicing_threshold < 1.0)) bad("voicing_threshold must be in (0, 1)");
  if (!(silence_rms_floor >= 0.0)) bad("silence_rms_floor must be >= 0");
  if (median_window <= 0 || median_window % 2 == 0) bad("median_window must be an odd positive integer");
  if (sample_rate <= 0) bad("sample_rate must be positive");
  if (!is_power_of_two(static_cast<std::size_t>(frame_size)) || frame_size < 512 || frame_size > 8192) {
    bad("frame_size must be a power of two in [512, 8192]");
  }
  if (hop_size <= 0 || hop_size > frame_size) bad("hop_size must be in [1, frame_size]");
  validate_for(sample_rate, static_cast<std::size_t>(frame_size));
}

void EngineSettings::validate_for(int frame_sample_rate, std::size_t frame_length) const {
  if (!(f_min > 0.0 && f_max > f_min)) {
    fail(ErrorKind::configuration, "need 0 < f_min < f_max");
  }
  if (!(f_max < frame_sample_rate / 2.0)) {
    fail(ErrorKind::configuration, "f_max must be below half the sample rate");
  }
  const double max_lag = std::ceil(frame_sample_rate / f_min);
  if (max_lag + 1.0 > static_cast<double>(frame_length) / 2.0) {
    fail(ErrorKind::configuration,
         "f_min too low for the frame length: longest period (" + std::to_string(max_lag) +
             " samples) must fit in half a frame of " + std::to_string(frame_length));
  }
}

void PitchTrack::validate() const {
  for (std::size_t i = 1; i < estimates.size(); ++i) {
    if (!(estimates[i].t_ms > estimates[i - 1].t_ms)) {
      fail(ErrorKind::structural, "track timestamps must be strictly increasing");
    }
  }
}

}  // namespace phonic::pitch
