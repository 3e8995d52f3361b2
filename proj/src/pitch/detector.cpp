// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "pitch/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "common/error.hpp"

#include "pitch/methods.hpp"

namespace phonic::pitch {

Vertex parabolic_vertex(double left, double center, double right) noexcept {
  const double denom = left - 2.0 * center + right;
  if (denom == 0.0 || !std::isfinite(denom)) return {0.0, center};
  double offset = 0.5 * (left - right) / denom;
  if (!(offset > -1.0 && offset < 1.0)) return {0.0, center};
  return {offset, center - 0.25 * (left - right) * offset};
}

PitchEstimate detect_f0(const AudioFrame& frame, const EngineSettings& settings) {
  frame.validate();
  settings.validate_for(frame.sample_rate, frame.samples.size());
  if (!(settings.voicing_threshold > 0.0 && settings.voicing_threshold < 1.0)) {
    fail(ErrorKind::configuration, "voicing_threshold must be in (0, 1)");
  }
  if (!(settings.silence_rms_floor >= 0.0)) {
    fail(ErrorKind::configuration, "silence_rms_floor must be >= 0");
  }

  double energy = 0.0;
  double sum = 0.0;
  for (double v : frame.samples) {
    energy += v * v;
    sum += v;
  }
  const auto n = static_cast<double>(frame.samples.size());
  const double rms = std::sqrt(energy / n);
  if (energy == 0.0 || rms < settings.silence_rms_floor) {
    return PitchEstimate::unvoiced(frame.t_start_ms, 0.0);
  }

  // Every method works on the zero-mean frame.
  std::vector<double> centered(frame.samples);
  const double mean = sum / n;
  for (double& v : centered) v -= mean;
  const std::span<const double> x(centered);

  detail::Candidate c;
  switch (settings.method) {
    case Method::acf: c = detail::detect_acf(x, frame.sample_rate, settings); break;
    case Method::amdf: c = detail::detect_amdf(x, frame.sample_rate, settings); break;
    case Method::yin: c = detail::detect_yin(x, frame.sample_rate, settings); break;
    case Method::mpm: c = detail::detect_mpm(x, frame.sample_rate, settings); break;
    case Method::cepstrum: c = detail::detect_cepstrum(x, frame.sample_rate, settings); break;
    case Method::hps: c = detail::detect_hps(x, frame.sample_rate, settings); break;
    case Method::shs: c = detail::detect_shs(x, frame.sample_rate, settings); break;
  }

  double confidence = std::isfinite(c.confidence) ? c.confidence : 0.0;
  confidence = std::clamp(confidence, 0.0, 1.0);
  const bool in_range = c.f0_hz >= settings.f_min && c.f0_hz <= settings.f_max;
  if (!in_range || confidence < settings.voicing_threshold) {
    return PitchEstimate::unvoiced(frame.t_start_ms, confidence);
  }
  return PitchEstimate::voiced_at(frame.t_start_ms, c.f0_hz, confidence);
}

}  // namespace phonic::pitch
