// Copyright 2026 The Phonic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pitch/types.hpp"

namespace phonic::pitch {

/// Running median over voiced Mel values with a centered window of
/// `median_window` frames (truncated at the track edges; unvoiced frames in
/// the window are skipped). Unvoiced gaps shorter than (median_window-1)/2
/// frames with voiced frames on both sides are first bridged by linear
/// interpolation in Mel. Timestamps are unchanged. Even windows are a
/// configuration error.
PitchTrack smooth_track(const PitchTrack& track, int median_window);

/// The value smooth_track produces at index i. Reads raw[i - L .. i + L]
/// only, with L = IncrementalSmoother::lookahead(median_window).
PitchEstimate smoothed_at(std::span<const PitchEstimate> raw, std::size_t i, int median_window,
                          const EngineSettings& settings);

/// Live counterpart of smooth_track: outputs trail the input by
/// lookahead() frames and, after flush(), equal smooth_track of everything
/// pushed.
class IncrementalSmoother {
 public:
  explicit IncrementalSmoother(const EngineSettings& settings);

  static std::size_t lookahead(int median_window);

  /// Adds a raw estimate; returns the smoothed estimates that became final.
  std::vector<PitchEstimate> push(const PitchEstimate& raw);
  /// Finalizes everything still pending (end of stream).
  std::vector<PitchEstimate> flush();

  std::size_t pending() const noexcept { return raw_.size() - next_; }

 private:
  EngineSettings settings_;
  std::vector<PitchEstimate> raw_;
  std::size_t next_ = 0;
};

}  // namespace phonic::pitch
