// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace phonic::pitch {

// mel = 2595 * log10(1 + hz / 700). Negative inputs throw a domain error.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

}  // namespace phonic::pitch
