// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "pitch/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "common/error.hpp"

namespace phonic::pitch {

namespace {

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

PcmAudio parse_wav(std::span<const std::uint8_t> b) {
  auto bad = [](const std::string& what) { fail(ErrorKind::structural, "wav: " + what); };
  if (b.size() < 12 || !tag_is(b, 0, "RIFF") || !tag_is(b, 8, "WAVE")) bad("not a RIFF/WAVE file");

  bool have_fmt = false;
  PcmAudio audio;
  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const std::uint32_t size = read_u32(b, at + 4);
    const std::size_t body = at + 8;
    if (size > b.size() - body) bad("truncated chunk");
    if (tag_is(b, at, "fmt ")) {
      if (size < 16) bad("short fmt chunk");
      const auto format = read_u16(b, body);
      const auto channels = read_u16(b, body + 2);
      const auto bits = read_u16(b, body + 14);
      if (format != 1) bad("only PCM (format 1) is supported");
      if (channels != 1) bad("only mono is supported");
      if (bits != 16) bad("only 16-bit samples are supported");
      audio.sample_rate = static_cast<int>(read_u32(b, body + 4));
      if (audio.sample_rate <= 0) bad("invalid sample rate");
      have_fmt = true;
    } else if (tag_is(b, at, "data")) {
      if (!have_fmt) bad("data chunk before fmt chunk");
      audio.samples.reserve(size / 2);
      for (std::size_t i = 0; i + 1 < size; i += 2) {
        const auto raw = static_cast<std::int16_t>(read_u16(b, body + i));
        audio.samples.push_back(static_cast<double>(raw) / 32768.0);
      }
      return audio;
    }
    at = body + size + (size & 1U);
  }
  fail(ErrorKind::structural, "wav: no data chunk");
}

PcmAudio read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(std::span<const double> samples, int sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : samples) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples, int sample_rate) {
  const auto bytes = encode_wav(samples, sample_rate);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace phonic::pitch
