// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace phonic::pitch {

struct PcmAudio {
  std::vector<double> samples;  // scaled to [-1, 1)
  int sample_rate = 0;
};

/// Reads a RIFF/WAVE file holding 16-bit signed little-endian mono PCM.
/// Anything else is a structural error.
PcmAudio read_wav(const std::filesystem::path& path);
PcmAudio parse_wav(std::span<const std::uint8_t> bytes);

/// Writes 16-bit mono PCM; samples are clamped to [-1, 1].
void write_wav(const std::filesystem::path& path, std::span<const double> samples, int sample_rate);
std::vector<std::uint8_t> encode_wav(std::span<const double> samples, int sample_rate);

}  // namespace phonic::pitch
