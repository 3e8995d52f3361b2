// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phonic::pitch::detail {

// Frames are zero-padded by this factor before the FFT.
inline constexpr std::size_t kPadFactor = 4;

/// Magnitude spectrum (bins 0..M/2) of the Hann-windowed frame zero-padded
/// to M = kPadFactor * x.size().
std::vector<double> padded_magnitude(std::span<const double> x);

/// Inverse real DFT of a real, even spectrum given as bins 0..M/2; returns
/// the M-point real sequence scaled by 1/M.
std::vector<double> inverse_real(std::span<const double> half_spectrum);

}  // namespace phonic::pitch::detail
