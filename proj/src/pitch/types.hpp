// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phonic::pitch {

enum class Method { acf, amdf, yin, mpm, cepstrum, hps, shs };

inline constexpr std::array<Method, 7> kAllMethods = {
    Method::acf, Method::amdf,     Method::yin, Method::mpm,
    Method::cepstrum, Method::hps, Method::shs};

std::string_view to_string(Method method) noexcept;
// Accepts the upper-case names used on the wire ("YIN", "MPM", ...) and
// their lower-case spellings. Unknown names are a configuration error.
Method method_from_string(std::string_view name);

/// A window of mono PCM. Lengths are powers of two in [512, 8192] and every
/// sample lies in [-1, 1].
struct AudioFrame {
  std::vector<double> samples;
  int sample_rate = 44100;
  double t_start_ms = 0.0;

  void validate() const;
};

struct PitchEstimate {
  std::optional<double> f0_hz;
  std::optional<double> mel;
  double confidence = 0.0;
  bool voiced = false;
  double t_ms = 0.0;

  static PitchEstimate unvoiced(double t_ms, double confidence = 0.0);
  static PitchEstimate voiced_at(double t_ms, double f0_hz, double confidence);
  // Builds a voiced estimate from a Mel value (f0 derived by inversion).
  static PitchEstimate voiced_mel(double t_ms, double mel, double confidence);

  bool operator==(const PitchEstimate&) const = default;
};

struct EngineSettings {
  Method method = Method::yin;
  double f_min = 60.0;
  double f_max = 600.0;
  double voicing_threshold = 0.5;
  double silence_rms_floor = 0.01;
  int median_window = 5;
  // Framing used when audio is cut into frames (streaming, evaluation).
  int sample_rate = 44100;
  int frame_size = 2048;
  int hop_size = 512;

  // Checks the field ranges that do not depend on a particular frame.
  void validate() const;
  // Checks consistency with a frame's sample rate and length: the lag range
  // implied by f_min must fit in half the frame, and f_max < rate / 2.
  void validate_for(int frame_sample_rate, std::size_t frame_length) const;

  double hop_ms() const { return 1000.0 * hop_size / sample_rate; }

  bool operator==(const EngineSettings&) const = default;
};

struct PitchTrack {
  std::vector<PitchEstimate> estimates;
  EngineSettings settings;

  // Timestamps strictly increasing.
  void validate() const;

  bool operator==(const PitchTrack&) const = default;
};

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace phonic::pitch
