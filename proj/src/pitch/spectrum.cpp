// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "pitch/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace phonic::pitch::detail {

namespace {

struct RealDeleter {
  void operator()(double* p) const noexcept { fftw_free(p); }
};
struct ComplexDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], RealDeleter>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], ComplexDeleter>;

RealBuffer alloc_real(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }
ComplexBuffer alloc_complex(std::size_t n) { return ComplexBuffer(fftw_alloc_complex(n)); }

// FFTW planning is not thread-safe, execution with new-array functions is.
// Plans are made once per size with FFTW_ESTIMATE (deterministic) and live
// for the rest of the process.
class PlanCache {
 public:
  fftw_plan forward(int m) { return get(forward_, m, true); }
  fftw_plan inverse(int m) { return get(inverse_, m, false); }

 private:
  fftw_plan get(std::map<int, fftw_plan>& plans, int m, bool forward) {
    std::lock_guard lock(mutex_);
    if (auto it = plans.find(m); it != plans.end()) return it->second;
    auto real = alloc_real(static_cast<std::size_t>(m));
    auto cplx = alloc_complex(static_cast<std::size_t>(m / 2 + 1));
    fftw_plan plan = forward
        ? fftw_plan_dft_r2c_1d(m, real.get(), cplx.get(), FFTW_ESTIMATE)
        : fftw_plan_dft_c2r_1d(m, cplx.get(), real.get(), FFTW_ESTIMATE);
    plans.emplace(m, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<int, fftw_plan> forward_;
  std::map<int, fftw_plan> inverse_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

}  // namespace

std::vector<double> padded_magnitude(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t m = n * kPadFactor;
  auto in = alloc_real(m);
  auto out = alloc_complex(m / 2 + 1);
  for (std::size_t i = 0; i < m; ++i) in[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                          static_cast<double>(n));
    in[i] = x[i] * w;
  }
  fftw_execute_dft_r2c(plans().forward(static_cast<int>(m)), in.get(), out.get());
  std::vector<double> mag(m / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
  return mag;
}

std::vector<double> inverse_real(std::span<const double> half_spectrum) {
  const std::size_t m = (half_spectrum.size() - 1) * 2;
  auto in = alloc_complex(half_spectrum.size());
  auto out = alloc_real(m);
  for (std::size_t k = 0; k < half_spectrum.size(); ++k) {
    in[k][0] = half_spectrum[k];
    in[k][1] = 0.0;
  }
  fftw_execute_dft_c2r(plans().inverse(static_cast<int>(m)), in.get(), out.get());
  std::vector<double> result(m);
  for (std::size_t i = 0; i < m; ++i) result[i] = out[i] / static_cast<double>(m);
  return result;
}

}  // namespace phonic::pitch::detail
