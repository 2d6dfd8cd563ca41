// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fragqa/core/rng.hpp"
#include "fragqa/ingest/frames.hpp"
#include "fragqa/ingest/manifest.hpp"

namespace fragqa {

/// Describes a synthetic clip with known motion and marker presence.
struct FixtureSpec {
  std::string video_id = "fixture";
  int frame_count = 10;
  int width = 32;
  int height = 32;
  int marker_size = 8;
  std::string target = "marker";
  // One entry per frame; empty means no marker anywhere.
  std::vector<bool> marker_schedule;
  // Designed change mass per transition (frame_count - 1 entries); empty
  // means a static clip.
  std::vector<std::uint64_t> motion_schedule;
};

struct Fixture {
  FrameSequence sequence;
  PresenceMap presence;
  // Exact per-transition sum of absolute pixel differences, marker toggles
  // included.
  std::vector<std::uint64_t> motion_truth;
};

/// Background is seeded noise; motion is applied by perturbing distinct
/// non-marker pixels so each transition's absolute difference sum equals its
/// scheduled mass exactly; the marker is a 255-valued square drawn on the
/// scheduled frames at a fixed seeded location.
Fixture synthesize_fixture(const FixtureSpec& spec, const RngKey& key);

/// Writes frames as NNN.png under dir/<video_id>/, optionally a presence
/// sidecar next to them, and returns the matching manifest entry.
ManifestEntry write_fixture(const Fixture& fixture, const std::filesystem::path& dir,
                            bool with_sidecar = true);

}  // namespace fragqa
