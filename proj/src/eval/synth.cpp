// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "eval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "pitch/framing.hpp"

namespace phonic::eval {

namespace {

// Noise uses its own stream so that changing the SNR leaves the glottal
// perturbations untouched.
constexpr std::uint64_t kNoiseStream = 0x6E6F697365ULL;
constexpr double kPulseWidth = 0.1;

// PolyBLEP residual for a unit downward step at phase 0 with per-sample
// phase increment dt.
double poly_blep(double phase, double dt) {
  if (phase < dt) {
    const double t = phase / dt;
    return t + t - t * t - 1.0;
  }
  if (phase > 1.0 - dt) {
    const double t = (phase - 1.0) / dt;
    return t * t + t + t + 1.0;
  }
  return 0.0;
}

double wave(Waveform w, double phase, double dt) {
  switch (w) {
    case Waveform::sine:
      return std::sin(2.0 * std::numbers::pi * phase);
    case Waveform::sawtooth:
      // Band-limited; a naive ramp aliases into a subharmonic grid.
      return 2.0 * phase - 1.0 - poly_blep(phase, dt);
    case Waveform::pulse_train: {
      // Raised-cosine pulse, DC removed.
      const double pulse = phase < kPulseWidth
          ? 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * phase / kPulseWidth))
          : 0.0;
      return pulse - 0.5 * kPulseWidth;
    }
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(Waveform w) noexcept {
  switch (w) {
    case Waveform::sine: return "sine";
    case Waveform::sawtooth: return "sawtooth";
    case Waveform::pulse_train: return "pulse-train";
  }
  return "?";
}

Waveform waveform_from_string(std::string_view name) {
  for (Waveform w : {Waveform::sine, Waveform::sawtooth, Waveform::pulse_train}) {
    if (to_string(w) == name) return w;
  }
  if (name == "pulse_train") return Waveform::pulse_train;
  fail(ErrorKind::configuration, "unknown waveform '" + std::string(name) + "'");
}

void SignalSpec::validate(int sample_rate) const {
  auto bad = [this](const std::string& what) {
    fail(ErrorKind::configuration, "signal '" + name + "': " + what);
  };
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) bad("duration_s must be > 0");
  if (!(jitter_pct >= 0.0 && jitter_pct <= 20.0)) bad("jitter_pct must be in [0, 20]");
  if (!(shimmer_pct >= 0.0 && shimmer_pct <= 20.0)) bad("shimmer_pct must be in [0, 20]");
  if (noise_snr_db && !std::isfinite(*noise_snr_db)) bad("noise_snr_db must be finite");
  if (!(amplitude > 0.0 && amplitude <= 1.0)) bad("amplitude must be in (0, 1]");
  if (f0_contour.empty()) bad("f0_contour must have at least one point");
  for (std::size_t i = 0; i < f0_contour.size(); ++i) {
    const auto& p = f0_contour[i];
    if (!std::isfinite(p.t_s) || (i > 0 && !(p.t_s >= f0_contour[i - 1].t_s))) {
      bad("f0_contour times must be finite and non-decreasing");
    }
    if (p.hz) {
      if (!(*p.hz > 0.0)) bad("f0_contour frequencies must be > 0");
      if (!(*p.hz < sample_rate / 2.0)) bad("f0_contour exceeds the Nyquist frequency");
    }
  }
}

std::optional<double> contour_at(const std::vector<ContourPoint>& contour, double t_s) {
  if (contour.empty()) return std::nullopt;
  if (t_s <= contour.front().t_s) return contour.front().hz;
  if (t_s >= contour.back().t_s) return contour.back().hz;
  const auto upper = std::upper_bound(contour.begin(), contour.end(), t_s,
                                      [](double t, const ContourPoint& p) { return t < p.t_s; });
  const auto& b = *upper;
  const auto& a = *(upper - 1);
  if (!a.hz || !b.hz) return std::nullopt;
  const double span = b.t_s - a.t_s;
  if (span <= 0.0) return b.hz;
  const double w = (t_s - a.t_s) / span;
  return *a.hz + w * (*b.hz - *a.hz);
}

Synthesis synthesize(const SignalSpec& spec, const Framing& framing) {
  spec.validate(framing.sample_rate);
  const double rate = framing.sample_rate;
  const auto total = static_cast<std::size_t>(std::llround(spec.duration_s * rate));

  Synthesis out;
  out.signal.assign(total, 0.0);
  std::vector<char> tonal(total, 0);

  Rng glottal(spec.seed);
  const double jitter = spec.jitter_pct / 100.0;
  const double shimmer = spec.shimmer_pct / 100.0;
  double phase = 0.0;
  bool sounding = false;
  double period_scale = 1.0;
  double cycle_amp = spec.amplitude;
  auto new_cycle = [&] {
    period_scale = 1.0 + jitter * glottal.uniform(-1.0, 1.0);
    cycle_amp = spec.amplitude * (1.0 + shimmer * glottal.uniform(-1.0, 1.0));
  };

  double tonal_energy = 0.0;
  std::size_t tonal_count = 0;
  for (std::size_t i = 0; i < total; ++i) {
    const auto f0 = contour_at(spec.f0_contour, static_cast<double>(i) / rate);
    if (!f0) {
      sounding = false;
      phase = 0.0;
      continue;
    }
    if (!sounding) {
      sounding = true;
      new_cycle();
    }
    const double increment = *f0 / period_scale / rate;
    const double v = cycle_amp * wave(spec.waveform, phase, increment);
    out.signal[i] = v;
    tonal[i] = 1;
    tonal_energy += v * v;
    ++tonal_count;
    phase += increment;
    if (phase >= 1.0) {
      phase -= std::floor(phase);
      new_cycle();
    }
  }

  if (spec.noise_snr_db) {
    const double reference = tonal_count > 0
        ? std::sqrt(tonal_energy / static_cast<double>(tonal_count))
        : spec.amplitude / std::sqrt(2.0);
    const double sigma = reference / std::pow(10.0, *spec.noise_snr_db / 20.0);
    Rng noise(spec.seed ^ kNoiseStream);
    for (double& v : out.signal) v += sigma * noise.normal();
  }
  for (double& v : out.signal) v = std::clamp(v, -1.0, 1.0);

  out.frames = pitch::frame_signal(out.signal, framing.sample_rate, framing.frame_size, framing.hop_size);
  const auto n = static_cast<std::size_t>(framing.frame_size);
  const auto hop = static_cast<std::size_t>(framing.hop_size);
  out.truth.reserve(out.frames.size());
  for (std::size_t f = 0; f < out.frames.size(); ++f) {
    const std::size_t begin = f * hop;
    std::size_t voiced = 0;
    for (std::size_t i = begin; i < begin + n; ++i) voiced += tonal[i] ? 1 : 0;
    if (2 * voiced <= n) {
      out.truth.emplace_back(std::nullopt);
      continue;
    }
    // Contour value at the frame center, or at the tonal sample nearest to it.
    const std::size_t center = begin + n / 2;
    std::optional<double> value;
    for (std::size_t d = 0; d <= n / 2 && !value; ++d) {
      for (std::size_t i : {center - d, center + d}) {
        if (i >= begin && i < begin + n && tonal[i]) {
          value = contour_at(spec.f0_contour, static_cast<double>(i) / rate);
          break;
        }
      }
    }
    out.truth.push_back(value);
  }
  return out;
}

}  // namespace phonic::eval
