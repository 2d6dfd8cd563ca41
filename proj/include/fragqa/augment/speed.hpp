// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "fragqa/ingest/frames.hpp"

namespace fragqa {

enum class Speed { fast, slow, normal, no_speed };

/// Identifier form: "fast", "slow", "normal", "no_speed".
std::string_view to_string(Speed s);
/// Answer-option form: "fast", "slow", "normal", "no speed".
std::string_view display_name(Speed s);
std::optional<Speed> parse_speed(std::string_view name);

struct SpeedLabel {
  Speed value = Speed::normal;
  // playback factor: k for fast, 1/k for slow, 1 for normal, 0 for no_speed
  Rational factor{1, 1};
};

struct SpeedConfig {
  int fast_factor = 2;  // keep every k-th frame
  int slow_factor = 2;  // emit k frames per source frame
  bool blend = false;   // slow motion by linear blending instead of duplication

  SpeedLabel label(Speed s) const;
};

struct SpeedVariant {
  FrameSequence sequence;
  // Source frame index each output frame came from; a blended frame maps to
  // the earlier of its two inputs.
  std::vector<int> source_indices;
};

/// fast(k): frames 0, k, 2k, ...; slow(1/k): each frame k times, or k-1
/// blended intermediates towards the next frame in blend mode; normal: copy;
/// no_speed: every frame replaced by the frame ending the highest-motion
/// transition (lowest index on ties).
SpeedVariant speed_variant(const FrameSequence& seq, const SpeedLabel& label, bool blend = false);

FrameSequence speed_transform(const FrameSequence& seq, const SpeedLabel& label, bool blend = false);

}  // namespace fragqa
