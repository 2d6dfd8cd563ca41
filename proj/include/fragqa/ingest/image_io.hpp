// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>

#include "fragqa/ingest/frames.hpp"

namespace fragqa {

/// Luma conversion 0.299R + 0.587G + 0.114B, rounded half up.
constexpr std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  return static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) / 1000u);
}

/// Reads a PNG, binary PGM (P5) or binary PPM (P6) file as grayscale.
/// Throws IngestError naming the file on any failure.
GrayImage read_gray_image(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const GrayImage& image);

bool is_supported_image(const std::filesystem::path& path);

}  // namespace fragqa
