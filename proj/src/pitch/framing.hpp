// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pitch/types.hpp"

namespace phonic::pitch {

/// floor((samples - frame) / hop) + 1, or 0 when the signal is shorter than
/// one frame.
std::size_t frame_count(std::size_t samples, std::size_t frame_size, std::size_t hop_size);

/// Frame i starts at sample i * hop and is stamped 1000 * i * hop / rate ms.
std::vector<AudioFrame> frame_signal(std::span<const double> signal, int sample_rate,
                                     int frame_size, int hop_size);

/// Streaming counterpart of frame_signal: feeding the same samples in any
/// chunking yields the same frames.
class FrameAssembler {
 public:
  FrameAssembler(int sample_rate, int frame_size, int hop_size);

  /// Appends samples and returns every frame completed by them.
  std::vector<AudioFrame> push(std::span<const double> samples);

  std::uint64_t samples_received() const noexcept { return received_; }
  std::uint64_t frames_emitted() const noexcept { return emitted_; }

 private:
  int sample_rate_;
  std::size_t frame_size_;
  std::size_t hop_size_;
  std::vector<double> pending_;  // starts at sample emitted_ * hop
  std::uint64_t received_ = 0;
  std::uint64_t emitted_ = 0;
};

/// Runs detect_f0 over every frame of a signal.
PitchTrack analyze_signal(std::span<const double> signal, const EngineSettings& settings);

}  // namespace phonic::pitch
