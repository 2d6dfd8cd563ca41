// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fragqa/ingest/frames.hpp"

namespace fragqa {

/// Per-transition motion mass of a clip. Entry k describes the transition
/// from frame k to frame k+1.
struct MotionProfile {
  std::vector<std::uint64_t> magnitudes;
  // prefix[k] = magnitudes[0] + ... + magnitudes[k]
  std::vector<std::uint64_t> prefix;
  // prefix[k] / total; empty when degenerate
  std::vector<double> cdf;
  bool degenerate = true;

  std::uint64_t total() const noexcept { return prefix.empty() ? 0 : prefix.back(); }
  int frame_count() const noexcept { return static_cast<int>(magnitudes.size()) + 1; }
};

MotionProfile profile_from_magnitudes(std::vector<std::uint64_t> magnitudes);

/// Averages non-overlapping factor x factor blocks (round half up). Trailing
/// rows/columns that do not fill a block are dropped.
GrayImage box_downscale(const GrayImage& image, int factor);

/// Sum of absolute grayscale differences between consecutive frames,
/// optionally after box downscaling. Throws IngestError when frame sizes
/// differ within the sequence.
MotionProfile motion_profile(const FrameSequence& seq, std::optional<int> downscale = std::nullopt);

}  // namespace fragqa
