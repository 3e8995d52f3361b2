// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pitch/types.hpp"

namespace phonic::eval {

enum class Waveform { sine, sawtooth, pulse_train };

std::string_view to_string(Waveform w) noexcept;
Waveform waveform_from_string(std::string_view name);

/// One breakpoint of a piecewise-linear f0 contour. An absent `hz` marks
/// silence: any segment touching a silent breakpoint is silent.
struct ContourPoint {
  double t_s = 0.0;
  std::optional<double> hz;

  bool operator==(const ContourPoint&) const = default;
};

/// A synthetic voice. Dysphonia is simulated with the jitter / shimmer /
/// breathiness triad:
///   - every glottal cycle k gets its period scaled by (1 + jitter * u_k)
///     and its amplitude by (1 + shimmer * v_k), u_k, v_k ~ U[-1, 1];
///   - white Gaussian noise is added at `noise_snr_db` below the RMS of the
///     tonal part, over the whole signal (silent stretches included).
struct SignalSpec {
  std::string name;
  Waveform waveform = Waveform::sine;
  std::vector<ContourPoint> f0_contour;
  double duration_s = 1.0;
  double jitter_pct = 0.0;
  double shimmer_pct = 0.0;
  std::optional<double> noise_snr_db;
  std::uint64_t seed = 0;
  double amplitude = 0.5;

  void validate(int sample_rate) const;

  bool operator==(const SignalSpec&) const = default;
};

struct Framing {
  int sample_rate = 44100;
  int frame_size = 2048;
  int hop_size = 512;

  bool operator==(const Framing&) const = default;
};

/// Ground truth for one frame: the nominal contour frequency, absent when
/// the frame is not truth-voiced (half or fewer of its samples are tonal).
using Truth = std::vector<std::optional<double>>;

struct Synthesis {
  std::vector<double> signal;
  std::vector<pitch::AudioFrame> frames;
  Truth truth;
};

/// Contour value at time t; values before the first and after the last
/// breakpoint hold the end values.
std::optional<double> contour_at(const std::vector<ContourPoint>& contour, double t_s);

/// Renders the signal and cuts it into frames. Deterministic given the seed.
Synthesis synthesize(const SignalSpec& spec, const Framing& framing = {});

}  // namespace phonic::eval
