// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "sync/codec.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>

#include "common/error.hpp"

namespace phonic::sync {

static_assert(std::endian::native == std::endian::little, "wire format assumes a little-endian host");

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) fail(ErrorKind::protocol, "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) fail(ErrorKind::protocol, "invalid base64");
  // DecodeBlock keeps the bytes produced by '=' padding.
  std::size_t size = static_cast<std::size_t>(n);
  if (!text.empty() && text.back() == '=') --size;
  if (text.size() > 1 && text[text.size() - 2] == '=') --size;
  out.resize(size);
  return out;
}

std::string encode_samples(std::span<const double> samples) {
  std::vector<std::uint8_t> bytes(samples.size() * 4);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const float f = static_cast<float>(samples[i]);
    std::memcpy(bytes.data() + 4 * i, &f, 4);
  }
  return base64_encode(bytes);
}

std::vector<double> decode_samples(std::string_view base64) {
  const auto bytes = base64_decode(base64);
  if (bytes.size() % 4 != 0) fail(ErrorKind::protocol, "sample block is not a whole number of float32");
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    float f = 0.0F;
    std::memcpy(&f, bytes.data() + 4 * i, 4);
    out[i] = static_cast<double>(f);
  }
  return out;
}

std::string encode_frame(const nlohmann::json& message) {
  const std::string body = message.dump();
  const auto n = static_cast<std::uint32_t>(body.size());
  std::string out(4, '\0');
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((n >> (8 * i)) & 0xFFU);
  out += body;
  return out;
}

std::vector<nlohmann::json> FrameDecoder::push(std::string_view bytes) {
  buffer_.append(bytes);
  std::vector<nlohmann::json> out;
  std::size_t at = 0;
  while (buffer_.size() - at >= 4) {
    std::uint32_t n = 0;
    for (int i = 0; i < 4; ++i) n |= static_cast<std::uint32_t>(static_cast<unsigned char>(buffer_[at + i])) << (8 * i);
    if (n > kMaxFrameBytes) fail(ErrorKind::protocol, "frame exceeds the size limit");
    if (buffer_.size() - at - 4 < n) break;
    try {
      out.push_back(nlohmann::json::parse(buffer_.substr(at + 4, n)));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::protocol, std::string("malformed message: ") + e.what());
    }
    at += 4 + n;
  }
  buffer_.erase(0, at);
  return out;
}

}  // namespace phonic::sync
