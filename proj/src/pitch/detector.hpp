// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pitch/types.hpp"

namespace phonic::pitch {

/// Estimates the fundamental of one frame with the configured method.
///
/// A frame is voiced when its RMS reaches `silence_rms_floor` and the
/// method's periodicity confidence reaches `voicing_threshold`; the reported
/// f0 is then guaranteed to lie in [f_min, f_max]. Frames under the RMS
/// floor are unvoiced with confidence 0. Pure and reentrant.
PitchEstimate detect_f0(const AudioFrame& frame, const EngineSettings& settings);

/// YIN's cumulative mean normalized difference d'(tau) for tau in
/// [0, max_lag], using a fixed integration window of
/// `samples.size() - max_lag` samples. d'(0) is 1 by definition.
std::vector<double> cumulative_mean_normalized_difference(std::span<const double> samples,
                                                          std::size_t max_lag);

/// McLeod's normalized square difference function n(tau) for tau in
/// [0, max_lag]. Values lie in [-1, 1].
std::vector<double> normalized_square_difference(std::span<const double> samples,
                                                 std::size_t max_lag);

/// Parabolic vertex through (-1, left), (0, center), (1, right). Returns the
/// offset in (-1, 1) and the interpolated value; a flat triple yields 0.
struct Vertex {
  double offset = 0.0;
  double value = 0.0;
};
Vertex parabolic_vertex(double left, double center, double right) noexcept;

}  // namespace phonic::pitch
