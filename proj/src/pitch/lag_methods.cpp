// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

// Time-domain estimators: autocorrelation, average magnitude difference,
// YIN and the McLeod pitch method. All of them search integer lags in
// [sample_rate / f_max, sample_rate / f_min] and refine the winning lag with
// a three-point parabola. A winner sitting on the boundary of the range is
// returned unrefined.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pitch/detector.hpp"
#include "pitch/methods.hpp"

namespace phonic::pitch {

namespace {

// YIN absolute threshold on d'(tau).
constexpr double kYinThreshold = 0.1;
// MPM peak-picking constant: first key maximum within k of the highest.
constexpr double kMpmK = 0.9;
// AMDF: earliest valley within this fraction of (mean - min) of the deepest.
constexpr double kAmdfValleyTolerance = 0.1;

}  // namespace

std::vector<double> cumulative_mean_normalized_difference(std::span<const double> x,
                                                          std::size_t max_lag) {
  const std::size_t window = x.size() - max_lag;
  std::vector<double> d(max_lag + 1, 0.0);
  for (std::size_t tau = 1; tau <= max_lag; ++tau) {
    double acc = 0.0;
    for (std::size_t n = 0; n < window; ++n) {
      const double diff = x[n] - x[n + tau];
      acc += diff * diff;
    }
    d[tau] = acc;
  }
  std::vector<double> cmnd(max_lag + 1, 1.0);
  double running = 0.0;
  for (std::size_t tau = 1; tau <= max_lag; ++tau) {
    running += d[tau];
    cmnd[tau] = running > 0.0 ? d[tau] * static_cast<double>(tau) / running : 1.0;
  }
  return cmnd;
}

std::vector<double> normalized_square_difference(std::span<const double> x,
                                                 std::size_t max_lag) {
  const std::size_t n = x.size();
  std::vector<double> nsdf(max_lag + 1, 0.0);
  double m = 0.0;
  for (double v : x) m += 2.0 * v * v;
  for (std::size_t tau = 0; tau <= max_lag; ++tau) {
    if (tau > 0) {
      m -= x[n - tau] * x[n - tau] + x[tau - 1] * x[tau - 1];
    }
    double r = 0.0;
    for (std::size_t j = 0; j + tau < n; ++j) r += x[j] * x[j + tau];
    nsdf[tau] = m > 0.0 ? 2.0 * r / m : 0.0;
  }
  return nsdf;
}

namespace detail {

LagRange lag_range(const EngineSettings& s, int sample_rate) {
  LagRange r;
  r.lo = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(sample_rate / s.f_max)));
  r.hi = static_cast<std::size_t>(std::ceil(sample_rate / s.f_min));
  return r;
}

namespace {

// Refines an extremum of `curve` at integer lag `tau`. The curve must be
// defined on [tau - 1, tau + 1] whenever tau is strictly inside [lo, hi].
struct Refined {
  double lag;
  double value;
};

Refined refine(const std::vector<double>& curve, std::size_t tau, LagRange range) {
  if (tau <= range.lo || tau >= range.hi) {
    return {static_cast<double>(tau), curve[tau]};
  }
  const Vertex v = parabolic_vertex(curve[tau - 1], curve[tau], curve[tau + 1]);
  return {static_cast<double>(tau) + v.offset, v.value};
}

}  // namespace

Candidate detect_acf(std::span<const double> x, int sample_rate, const EngineSettings& s) {
  const LagRange range = lag_range(s, sample_rate);
  const std::size_t n = x.size();
  std::vector<double> r(range.hi + 2, 0.0);
  for (std::size_t tau = 0; tau < r.size(); ++tau) {
    double acc = 0.0;
    for (std::size_t j = 0; j + tau < n; ++j) acc += x[j] * x[j + tau];
    r[tau] = acc;
  }
  if (!(r[0] > 0.0)) return {};

  // Selection on the biased estimate favours the shortest period; the value
  // and refinement use the unbiased, energy-normalized estimate.
  std::vector<double> unbiased(r.size());
  for (std::size_t tau = 0; tau < r.size(); ++tau) {
    unbiased[tau] = (r[tau] / static_cast<double>(n - tau)) * (static_cast<double>(n) / r[0]);
  }

  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t tau = range.lo; tau <= range.hi; ++tau) {
    const bool peak = r[tau] >= r[tau - 1] && r[tau] > r[tau + 1];
    if (peak && r[tau] > best_value) {
      best = tau;
      best_value = r[tau];
    }
  }
  if (best == 0) {
    best = range.lo;
    for (std::size_t tau = range.lo; tau <= range.hi; ++tau) {
      if (r[tau] > r[best]) best = tau;
    }
    return {sample_rate / static_cast<double>(best), unbiased[best]};
  }
  const Refined ref = refine(unbiased, best, range);
  return {sample_rate / ref.lag, ref.value};
}

Candidate detect_amdf(std::span<const double> x, int sample_rate, const EngineSettings& s) {
  const LagRange range = lag_range(s, sample_rate);
  const std::size_t window = x.size() - range.hi - 1;
  std::vector<double> d(range.hi + 2, 0.0);
  for (std::size_t tau = range.lo - 1; tau <= range.hi + 1; ++tau) {
    double acc = 0.0;
    for (std::size_t j = 0; j < window; ++j) acc += std::abs(x[j] - x[j + tau]);
    d[tau] = acc / static_cast<double>(window);
  }

  double mean = 0.0;
  for (std::size_t tau = range.lo; tau <= range.hi; ++tau) mean += d[tau];
  mean /= static_cast<double>(range.hi - range.lo + 1);
  if (!(mean > 0.0)) return {};

  std::vector<std::size_t> valleys;
  double deepest = std::numeric_limits<double>::infinity();
  for (std::size_t tau = range.lo; tau <= range.hi; ++tau) {
    if (d[tau] <= d[tau - 1] && d[tau] < d[tau + 1]) {
      valleys.push_back(tau);
      deepest = std::min(deepest, d[tau]);
    }
  }
  std::size_t best = 0;
  if (valleys.empty()) {
    best = range.lo;
    for (std::size_t tau = range.lo; tau <= range.hi; ++tau) {
      if (d[tau] < d[best]) best = tau;
    }
    return {sample_rate / static_cast<double>(best), 1.0 - d[best] / mean};
  }
  const double accept = deepest + kAmdfValleyTolerance * (mean - deepest);
  for (std::size_t tau : valleys) {
    if (d[tau] <= accept) {
      best = tau;
      break;
    }
  }
  const Refined ref = refine(d, best, range);
  return {sample_rate / ref.lag, 1.0 - ref.value / mean};
}

Candidate detect_yin(std::span<const double> x, int sample_rate, const EngineSettings& s) {
  const LagRange range = lag_range(s, sample_rate);
  const std::vector<double> cmnd = cumulative_mean_normalized_difference(x, range.hi + 1);

  std::size_t best = 0;
  for (std::size_t tau = range.lo; tau <= range.hi; ++tau) {
    if (cmnd[tau] < kYinThreshold) {
      while (tau + 1 <= range.hi && cmnd[tau + 1] < cmnd[tau]) ++tau;
      best = tau;
      break;
    }
  }
  if (best == 0) {
    best = range.lo;
    for (std::size_t tau = range.lo; tau <= range.hi; ++tau) {
      if (cmnd[tau] < cmnd[best]) best = tau;
    }
  }
  const Refined ref = refine(cmnd, best, range);
  return {sample_rate / ref.lag, 1.0 - ref.value};
}

Candidate detect_mpm(std::span<const double> x, int sample_rate, const EngineSettings& s) {
  const LagRange range = lag_range(s, sample_rate);
  const std::vector<double> nsdf = normalized_square_difference(x, range.hi + 1);

  // Key maxima: the highest point between each positive-going zero crossing
  // and the following negative-going one. The lobe around lag 0 is skipped.
  std::vector<std::size_t> key_maxima;
  std::size_t tau = 1;
  while (tau < nsdf.size() && nsdf[tau] > 0.0) ++tau;
  while (tau < nsdf.size()) {
    while (tau < nsdf.size() && nsdf[tau] <= 0.0) ++tau;
    if (tau >= nsdf.size()) break;
    std::size_t arg = tau;
    while (tau < nsdf.size() && nsdf[tau] > 0.0) {
      if (nsdf[tau] > nsdf[arg]) arg = tau;
      ++tau;
    }
    const bool closed = tau < nsdf.size() || arg + 1 < nsdf.size();
    if (closed && arg >= range.lo && arg <= range.hi) key_maxima.push_back(arg);
  }
  if (key_maxima.empty()) return {};

  double highest = 0.0;
  for (std::size_t k : key_maxima) highest = std::max(highest, nsdf[k]);
  std::size_t best = key_maxima.front();
  for (std::size_t k : key_maxima) {
    if (nsdf[k] >= kMpmK * highest) {
      best = k;
      break;
    }
  }
  const Refined ref = refine(nsdf, best, range);
  return {sample_rate / ref.lag, ref.value};
}

}  // namespace detail
}  // namespace phonic::pitch
