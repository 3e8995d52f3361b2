// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "pitch/mel.hpp"

#include <cmath>
#include <string>

#include "common/error.hpp"

namespace phonic::pitch {

namespace {
constexpr double kMelScale = 2595.0;
constexpr double kBreakHz = 700.0;
}  // namespace

double hz_to_mel(double hz) {
  if (!(hz >= 0.0)) {
    fail(ErrorKind::domain, "hz_to_mel: frequency must be >= 0, got " + std::to_string(hz));
  }
  return kMelScale * std::log10(1.0 + hz / kBreakHz);
}

double mel_to_hz(double mel) {
  if (!(mel >= 0.0)) {
    fail(ErrorKind::domain, "mel_to_hz: mel must be >= 0, got " + std::to_string(mel));
  }
  // expm1 keeps small mel values accurate.
  return kBreakHz * std::expm1(mel / kMelScale * std::log(10.0));
}

}  // namespace phonic::pitch
