// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

// Wire helpers for the live stream: base64, little-endian float32 sample
// blocks, and [u32 LE length][JSON] message framing.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace phonic::sync {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Invalid input is a protocol error.
std::vector<std::uint8_t> base64_decode(std::string_view text);

std::string encode_samples(std::span<const double> samples);
std::vector<double> decode_samples(std::string_view base64);

/// Largest accepted frame payload.
inline constexpr std::uint32_t kMaxFrameBytes = 16U << 20;

std::string encode_frame(const nlohmann::json& message);

/// Splits a byte stream into messages; frames may arrive split across or
/// packed into transport messages.
class FrameDecoder {
 public:
  /// Appends bytes and returns every complete message. A bad length or
  /// unparsable JSON is a protocol error.
  std::vector<nlohmann::json> push(std::string_view bytes);
  std::size_t buffered() const noexcept { return buffer_.size(); }

 private:
  std::string buffer_;
};

}  // namespace phonic::sync
