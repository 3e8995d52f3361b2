// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

// Frequency-domain estimators: real cepstrum, harmonic product spectrum and
// subharmonic summation. All three share the zero-padded Hann magnitude
// spectrum. Confidence is a peak-to-mean ratio of the method's score curve
// mapped to [0, 1] with a fixed per-method offset and scale.

#include <algorithm>
#include <cmath>
#include <vector>

#include "pitch/detector.hpp"
#include "pitch/methods.hpp"
#include "pitch/spectrum.hpp"

namespace phonic::pitch::detail {

namespace {

constexpr int kHpsProducts = 4;
constexpr int kShsSubharmonics = 8;
constexpr double kShsDecay = 0.84;

// Floor added before taking logs, relative to the spectral maximum.
constexpr double kLogFloor = 1e-3;
// HPS candidates must be spectral peaks at least this fraction of the maximum.
constexpr double kHpsCandidateLevel = 0.1;

// ratio -> confidence = clamp((ratio - offset) / scale)
struct ConfidenceMap {
  double offset;
  double scale;
  double operator()(double ratio) const {
    return std::clamp((ratio - offset) / scale, 0.0, 1.0);
  }
};
constexpr ConfidenceMap kCepstrumConfidence{5.0, 10.0};
constexpr ConfidenceMap kHpsConfidence{0.8, 0.6};  // applied to log10(ratio)
constexpr ConfidenceMap kShsConfidence{1.6, 1.5};

struct BinRange {
  std::size_t lo;
  std::size_t hi;
};

BinRange bin_range(const EngineSettings& s, int sample_rate, std::size_t m) {
  const double per_bin = static_cast<double>(sample_rate) / static_cast<double>(m);
  // Bracketing bins, so an estimate near a range limit can still be refined.
  return {std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(s.f_min / per_bin))),
          static_cast<std::size_t>(std::ceil(s.f_max / per_bin))};
}

double bin_to_hz(double bin, int sample_rate, std::size_t m) {
  return bin * static_cast<double>(sample_rate) / static_cast<double>(m);
}

}  // namespace

Candidate detect_cepstrum(std::span<const double> x, int sample_rate, const EngineSettings& s) {
  const std::vector<double> mag = padded_magnitude(x);
  const double peak = *std::max_element(mag.begin(), mag.end());
  if (!(peak > 0.0)) return {};
  const double floor = kLogFloor * peak;
  std::vector<double> log_mag(mag.size());
  for (std::size_t k = 0; k < mag.size(); ++k) log_mag[k] = std::log(mag[k] + floor);
  const std::vector<double> cep = inverse_real(log_mag);

  const LagRange range = lag_range(s, sample_rate);
  std::size_t best = 0;
  double mean_abs = 0.0;
  for (std::size_t q = range.lo; q <= range.hi; ++q) {
    mean_abs += std::abs(cep[q]);
    const bool local = cep[q] >= cep[q - 1] && cep[q] > cep[q + 1];
    if (local && (best == 0 || cep[q] > cep[best])) best = q;
  }
  mean_abs /= static_cast<double>(range.hi - range.lo + 1);
  if (best == 0 || !(mean_abs > 0.0)) return {};

  double lag = static_cast<double>(best);
  double value = cep[best];
  if (best > range.lo && best < range.hi) {
    const Vertex v = parabolic_vertex(cep[best - 1], cep[best], cep[best + 1]);
    lag += v.offset;
    value = v.value;
  }
  return {sample_rate / lag, kCepstrumConfidence(value / mean_abs)};
}

Candidate detect_hps(std::span<const double> x, int sample_rate, const EngineSettings& s) {
  const std::vector<double> mag = padded_magnitude(x);
  const std::size_t m = (mag.size() - 1) * 2;
  const BinRange bins = bin_range(s, sample_rate, m);
  const double peak = *std::max_element(mag.begin() + static_cast<std::ptrdiff_t>(bins.lo), mag.end());
  if (!(peak > 0.0)) return {};
  const double floor = kLogFloor * peak;

  // Sum of log magnitudes at the first kHpsProducts multiples of bin k. The
  // h-th multiple takes the largest bin within h/2 bins to absorb the drift
  // of a fractional fundamental.
  auto log_hps = [&](std::size_t k) {
    double acc = 0.0;
    for (int h = 1; h <= kHpsProducts; ++h) {
      const std::size_t center = k * static_cast<std::size_t>(h);
      const std::size_t radius = static_cast<std::size_t>(h / 2);
      double best = 0.0;
      for (std::size_t j = center - radius; j <= center + radius && j < mag.size(); ++j) {
        best = std::max(best, mag[j]);
      }
      acc += std::log(best + floor);
    }
    return acc;
  };

  std::vector<double> curve(bins.hi + 1, 0.0);
  double max_curve = -1e300;
  for (std::size_t k = bins.lo; k <= bins.hi; ++k) {
    curve[k] = log_hps(k);
    max_curve = std::max(max_curve, curve[k]);
  }
  double mean_linear = 0.0;
  for (std::size_t k = bins.lo; k <= bins.hi; ++k) mean_linear += std::exp(curve[k] - max_curve);
  mean_linear /= static_cast<double>(bins.hi - bins.lo + 1);

  // Only spectral peaks are candidates, so a lone partial is never credited
  // to one of its subharmonics.
  std::size_t best = 0;
  for (std::size_t k = std::max<std::size_t>(bins.lo, 1); k <= bins.hi; ++k) {
    const bool local = mag[k] >= mag[k - 1] && mag[k] > mag[k + 1];
    if (local && mag[k] >= kHpsCandidateLevel * peak && (best == 0 || curve[k] > curve[best])) {
      best = k;
    }
  }
  if (best == 0) return {};

  const Vertex v = parabolic_vertex(std::log(mag[best - 1] + floor), std::log(mag[best] + floor),
                                    std::log(mag[best + 1] + floor));
  const double log10_ratio = (curve[best] - max_curve - std::log(mean_linear)) / std::log(10.0);
  return {bin_to_hz(static_cast<double>(best) + v.offset, sample_rate, m),
          kHpsConfidence(log10_ratio)};
}

Candidate detect_shs(std::span<const double> x, int sample_rate, const EngineSettings& s) {
  const std::vector<double> mag = padded_magnitude(x);
  const std::size_t m = (mag.size() - 1) * 2;
  const BinRange bins = bin_range(s, sample_rate, m);

  std::vector<double> sums(bins.hi + 2, 0.0);
  for (std::size_t k = bins.lo - 1; k <= bins.hi + 1; ++k) {
    double weight = 1.0;
    double acc = 0.0;
    for (int n = 1; n <= kShsSubharmonics; ++n) {
      const std::size_t bin = k * static_cast<std::size_t>(n);
      if (bin >= mag.size()) break;
      acc += weight * mag[bin];
      weight *= kShsDecay;
    }
    sums[k] = acc;
  }

  std::size_t best = bins.lo;
  double mean = 0.0;
  for (std::size_t k = bins.lo; k <= bins.hi; ++k) {
    mean += sums[k];
    if (sums[k] > sums[best]) best = k;
  }
  mean /= static_cast<double>(bins.hi - bins.lo + 1);
  if (!(mean > 0.0)) return {};

  double bin = static_cast<double>(best);
  double value = sums[best];
  if (best > bins.lo && best < bins.hi) {
    const Vertex v = parabolic_vertex(sums[best - 1], sums[best], sums[best + 1]);
    bin += v.offset;
    value = v.value;
  }
  return {bin_to_hz(bin, sample_rate, m), kShsConfidence(value / mean)};
}

}  // namespace phonic::pitch::detail
