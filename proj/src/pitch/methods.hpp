// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "pitch/types.hpp"

// Per-method kernels behind detect_f0. Each returns a raw candidate; the
// voicing decision and range check happen in the dispatcher.
namespace phonic::pitch::detail {

struct Candidate {
  double f0_hz = 0.0;  // 0 when the method found nothing
  double confidence = 0.0;
};

// Lag bounds shared by the time-domain methods.
struct LagRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};
LagRange lag_range(const EngineSettings& settings, int sample_rate);

Candidate detect_acf(std::span<const double> x, int sample_rate, const EngineSettings& s);
Candidate detect_amdf(std::span<const double> x, int sample_rate, const EngineSettings& s);
Candidate detect_yin(std::span<const double> x, int sample_rate, const EngineSettings& s);
Candidate detect_mpm(std::span<const double> x, int sample_rate, const EngineSettings& s);
Candidate detect_cepstrum(std::span<const double> x, int sample_rate, const EngineSettings& s);
Candidate detect_hps(std::span<const double> x, int sample_rate, const EngineSettings& s);
Candidate detect_shs(std::span<const double> x, int sample_rate, const EngineSettings& s);

}  // namespace phonic::pitch::detail
