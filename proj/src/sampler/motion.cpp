// SPDX-License-Identifier: Apache-2.0

#include "fragqa/sampler/motion.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "fragqa/core/errors.hpp"

namespace fragqa {

MotionProfile profile_from_magnitudes(std::vector<std::uint64_t> magnitudes) {
  MotionProfile p;
  p.magnitudes = std::move(magnitudes);
  p.prefix.reserve(p.magnitudes.size());
  std::uint64_t running = 0;
  for (auto m : p.magnitudes) {
    running += m;
    p.prefix.push_back(running);
  }
  p.degenerate = running == 0;
  if (!p.degenerate) {
    p.cdf.reserve(p.prefix.size());
    for (auto s : p.prefix) p.cdf.push_back(static_cast<double>(s) / static_cast<double>(running));
  }
  return p;
}

GrayImage box_downscale(const GrayImage& image, int factor) {
  if (factor < 1) throw std::invalid_argument("downscale factor must be >= 1");
  if (factor == 1) return image;
  const int w = image.width / factor;
  const int h = image.height / factor;
  if (w < 1 || h < 1) throw std::invalid_argument("downscale factor larger than the frame");
  const unsigned area = static_cast<unsigned>(factor * factor);
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      unsigned sum = 0;
      for (int dy = 0; dy < factor; ++dy) {
        for (int dx = 0; dx < factor; ++dx) sum += image.at(x * factor + dx, y * factor + dy);
      }
      out.at(x, y) = static_cast<std::uint8_t>((2 * sum + area) / (2 * area));
    }
  }
  return out;
}

MotionProfile motion_profile(const FrameSequence& seq, std::optional<int> downscale) {
  if (seq.size() < 2) throw std::invalid_argument("motion_profile needs at least 2 frames");
  const GrayImage& first = seq.frames.front().image;
  for (const Frame& f : seq.frames) {
    if (f.image.width != first.width || f.image.height != first.height) {
      throw IngestError(seq.video_id + ": frame " + std::to_string(f.index) + " is " +
                        std::to_string(f.image.width) + "x" + std::to_string(f.image.height) +
                        ", expected " + std::to_string(first.width) + "x" + std::to_string(first.height));
    }
  }
  const int factor = downscale.value_or(1);
  std::vector<std::uint64_t> magnitudes;
  magnitudes.reserve(seq.frames.size() - 1);
  GrayImage prev = box_downscale(first, factor);
  for (std::size_t t = 1; t < seq.frames.size(); ++t) {
    GrayImage cur = box_downscale(seq.frames[t].image, factor);
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < cur.pixels.size(); ++i) {
      sum += static_cast<std::uint64_t>(std::abs(int{cur.pixels[i]} - int{prev.pixels[i]}));
    }
    magnitudes.push_back(sum);
    prev = std::move(cur);
  }
  return profile_from_magnitudes(std::move(magnitudes));
}

}  // namespace fragqa
