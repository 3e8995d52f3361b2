// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phonic {

/// Error categories shared by every module. The C API maps each one onto a
/// distinct status code.
enum class ErrorKind {
  domain,         // argument outside a function's mathematical domain
  structural,     // malformed input data (bad frame, length mismatch, ...)
  configuration,  // settings that are invalid or inconsistent
  calibration,    // not enough or degenerate calibration data
  state,          // operation not allowed in the current state
  conflict,       // same identity, different content
  not_found,
  corruption,     // stored content failed its checksum or integrity check
  protocol,       // live stream protocol violation
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace phonic
