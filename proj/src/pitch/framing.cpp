// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "pitch/framing.hpp"

#include "pitch/detector.hpp"

namespace phonic::pitch {

std::size_t frame_count(std::size_t samples, std::size_t frame_size, std::size_t hop_size) {
  if (samples < frame_size || hop_size == 0) return 0;
  return (samples - frame_size) / hop_size + 1;
}

namespace {

double frame_time_ms(std::uint64_t index, std::size_t hop, int sample_rate) {
  return 1000.0 * static_cast<double>(index * hop) / sample_rate;
}

}  // namespace

std::vector<AudioFrame> frame_signal(std::span<const double> signal, int sample_rate,
                                     int frame_size, int hop_size) {
  const auto n = static_cast<std::size_t>(frame_size);
  const auto hop = static_cast<std::size_t>(hop_size);
  const std::size_t count = frame_count(signal.size(), n, hop);
  std::vector<AudioFrame> frames;
  frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    AudioFrame f;
    const auto chunk = signal.subspan(i * hop, n);
    f.samples.assign(chunk.begin(), chunk.end());
    f.sample_rate = sample_rate;
    f.t_start_ms = frame_time_ms(i, hop, sample_rate);
    frames.push_back(std::move(f));
  }
  return frames;
}

FrameAssembler::FrameAssembler(int sample_rate, int frame_size, int hop_size)
    : sample_rate_(sample_rate),
      frame_size_(static_cast<std::size_t>(frame_size)),
      hop_size_(static_cast<std::size_t>(hop_size)) {}

std::vector<AudioFrame> FrameAssembler::push(std::span<const double> samples) {
  pending_.insert(pending_.end(), samples.begin(), samples.end());
  received_ += samples.size();
  std::vector<AudioFrame> out;
  std::size_t offset = 0;
  while (pending_.size() - offset >= frame_size_) {
    AudioFrame f;
    f.samples.assign(pending_.begin() + static_cast<std::ptrdiff_t>(offset),
                     pending_.begin() + static_cast<std::ptrdiff_t>(offset + frame_size_));
    f.sample_rate = sample_rate_;
    f.t_start_ms = frame_time_ms(emitted_, hop_size_, sample_rate_);
    out.push_back(std::move(f));
    ++emitted_;
    offset += hop_size_;
  }
  pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(offset));
  return out;
}

PitchTrack analyze_signal(std::span<const double> signal, const EngineSettings& settings) {
  settings.validate();
  PitchTrack track;
  track.settings = settings;
  for (const auto& frame :
       frame_signal(signal, settings.sample_rate, settings.frame_size, settings.hop_size)) {
    track.estimates.push_back(detect_f0(frame, settings));
  }
  return track;
}

}  // namespace phonic::pitch
