// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "pitch/smoothing.hpp"

#include <algorithm>
#include <optional>

#include "common/error.hpp"
#include "pitch/mel.hpp"

namespace phonic::pitch {

namespace {

void check_window(int median_window) {
  if (median_window <= 0 || median_window % 2 == 0) {
    fail(ErrorKind::configuration, "median_window must be an odd positive integer");
  }
}

struct Bridged {
  double mel;
  double confidence;
};

// Voiced value of frame j after gap bridging, if any.
std::optional<Bridged> bridged_at(std::span<const PitchEstimate> raw, std::size_t j,
                                  std::size_t half) {
  if (raw[j].voiced) return Bridged{*raw[j].mel, raw[j].confidence};
  if (half <= 1) return std::nullopt;  // only gaps shorter than `half` bridge
  std::optional<std::size_t> left;
  for (std::size_t d = 1; d < half && d <= j; ++d) {
    if (raw[j - d].voiced) {
      left = j - d;
      break;
    }
  }
  if (!left) return std::nullopt;
  for (std::size_t d = 1; d < half && j + d < raw.size(); ++d) {
    if (raw[j + d].voiced) {
      const std::size_t right = j + d;
      if (right - *left - 1 >= half) return std::nullopt;
      const double a = *raw[*left].mel;
      const double b = *raw[right].mel;
      const double w = static_cast<double>(j - *left) / static_cast<double>(right - *left);
      return Bridged{a + w * (b - a), std::min(raw[*left].confidence, raw[right].confidence)};
    }
  }
  return std::nullopt;
}

}  // namespace

PitchEstimate smoothed_at(std::span<const PitchEstimate> raw, std::size_t i, int median_window,
                          const EngineSettings& settings) {
  check_window(median_window);
  const auto half = static_cast<std::size_t>(median_window - 1) / 2;
  const auto self = bridged_at(raw, i, half);
  if (!self) return raw[i];

  std::vector<double> window;
  window.reserve(static_cast<std::size_t>(median_window));
  const std::size_t lo = i >= half ? i - half : 0;
  const std::size_t hi = std::min(raw.size() - 1, i + half);
  for (std::size_t j = lo; j <= hi; ++j) {
    if (auto b = bridged_at(raw, j, half)) window.push_back(b->mel);
  }
  std::sort(window.begin(), window.end());
  const std::size_t mid = window.size() / 2;
  const double median =
      window.size() % 2 == 1 ? window[mid] : 0.5 * (window[mid - 1] + window[mid]);

  if (raw[i].voiced && median == *raw[i].mel) return raw[i];

  PitchEstimate out = PitchEstimate::voiced_mel(raw[i].t_ms, median, self->confidence);
  const double clamped = std::clamp(*out.f0_hz, settings.f_min, settings.f_max);
  if (clamped != *out.f0_hz) out = PitchEstimate::voiced_at(raw[i].t_ms, clamped, self->confidence);
  return out;
}

PitchTrack smooth_track(const PitchTrack& track, int median_window) {
  check_window(median_window);
  PitchTrack out;
  out.settings = track.settings;
  out.estimates.reserve(track.estimates.size());
  const std::span<const PitchEstimate> raw(track.estimates);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.estimates.push_back(smoothed_at(raw, i, median_window, track.settings));
  }
  return out;
}

std::size_t IncrementalSmoother::lookahead(int median_window) {
  const auto half = static_cast<std::size_t>(std::max(0, (median_window - 1) / 2));
  return half == 0 ? 0 : 2 * half - 1;
}

IncrementalSmoother::IncrementalSmoother(const EngineSettings& settings) : settings_(settings) {
  check_window(settings.median_window);
}

std::vector<PitchEstimate> IncrementalSmoother::push(const PitchEstimate& raw) {
  raw_.push_back(raw);
  std::vector<PitchEstimate> out;
  const std::size_t ahead = lookahead(settings_.median_window);
  while (next_ + ahead < raw_.size()) {
    out.push_back(smoothed_at(raw_, next_, settings_.median_window, settings_));
    ++next_;
  }
  return out;
}

std::vector<PitchEstimate> IncrementalSmoother::flush() {
  std::vector<PitchEstimate> out;
  while (next_ < raw_.size()) {
    out.push_back(smoothed_at(raw_, next_, settings_.median_window, settings_));
    ++next_;
  }
  return out;
}

}  // namespace phonic::pitch
