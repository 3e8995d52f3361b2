// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#include "common/error.hpp"

namespace phonic {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::structural: return "structural";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::calibration: return "calibration";
    case ErrorKind::state: return "state";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::corruption: return "corruption";
    case ErrorKind::protocol: return "protocol";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace phonic
