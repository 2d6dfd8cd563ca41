// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fragqa {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

  std::uint8_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }

  bool operator==(const GrayImage&) const = default;
};

struct Frame {
  int index = 0;  // chronological position, 0-based
  GrayImage image;
  std::string source_path;  // empty for frames synthesized in memory
};

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  bool operator==(const Rational&) const = default;
};

struct FrameSequence {
  std::string video_id;
  std::vector<Frame> frames;
  std::optional<Rational> fps_hint;
  std::optional<std::string> metadata_target;

  int size() const noexcept { return static_cast<int>(frames.size()); }
};

/// Per-frame presence of one annotated target.
struct PresenceMap {
  std::string video_id;
  std::string target;
  std::vector<bool> present;

  /// True when the target is absent from every frame. Localization questions
  /// cannot be generated from such a map.
  bool all_absent() const noexcept;
};

}  // namespace fragqa
