// SPDX-License-Identifier: Apache-2.0

#include "fragqa/augment/speed.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "fragqa/sampler/motion.hpp"

namespace fragqa {

namespace {

GrayImage blend(const GrayImage& a, const GrayImage& b, int step, int steps) {
  GrayImage out(a.width, a.height);
  const unsigned wa = static_cast<unsigned>(steps - step);
  const unsigned wb = static_cast<unsigned>(step);
  const unsigned den = static_cast<unsigned>(steps);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const unsigned num = wa * a.pixels[i] + wb * b.pixels[i];
    out.pixels[i] = static_cast<std::uint8_t>((2 * num + den) / (2 * den));
  }
  return out;
}

int integral_factor(const Rational& r, const char* what) {
  if (r.den <= 0 || r.num <= 0 || r.num % r.den != 0) {
    throw std::invalid_argument(std::string(what) + " factor must be a positive integer");
  }
  return static_cast<int>(r.num / r.den);
}

}  // namespace

std::string_view to_string(Speed s) {
  switch (s) {
    case Speed::fast: return "fast";
    case Speed::slow: return "slow";
    case Speed::normal: return "normal";
    case Speed::no_speed: return "no_speed";
  }
  return "unknown";
}

std::string_view display_name(Speed s) {
  return s == Speed::no_speed ? "no speed" : to_string(s);
}

std::optional<Speed> parse_speed(std::string_view name) {
  for (Speed s : {Speed::fast, Speed::slow, Speed::normal, Speed::no_speed}) {
    if (name == to_string(s) || name == display_name(s)) return s;
  }
  return std::nullopt;
}

SpeedLabel SpeedConfig::label(Speed s) const {
  switch (s) {
    case Speed::fast: return {s, {fast_factor, 1}};
    case Speed::slow: return {s, {1, slow_factor}};
    case Speed::normal: return {s, {1, 1}};
    case Speed::no_speed: return {s, {0, 1}};
  }
  return {};
}

SpeedVariant speed_variant(const FrameSequence& seq, const SpeedLabel& label, bool blend_mode) {
  const int n = seq.size();
  if (n < 2) throw std::invalid_argument("speed transform needs at least 2 frames");
  SpeedVariant out;
  out.sequence.video_id = seq.video_id + "#" + std::string(to_string(label.value));
  out.sequence.metadata_target = seq.metadata_target;
  out.sequence.fps_hint = seq.fps_hint;
  auto emit = [&](int src) {
    Frame f = seq.frames[static_cast<std::size_t>(src)];
    f.index = out.sequence.size();
    out.sequence.frames.push_back(std::move(f));
    out.source_indices.push_back(src);
  };

  switch (label.value) {
    case Speed::fast: {
      const int k = integral_factor(label.factor, "fast");
      if (k < 2 || k >= n) {
        throw std::invalid_argument("fast factor " + std::to_string(k) + " invalid for a " + std::to_string(n) +
                                    "-frame clip");
      }
      for (int i = 0; i < n; i += k) emit(i);
      break;
    }
    case Speed::slow: {
      if (label.factor.num != 1) throw std::invalid_argument("slow factor must be 1/k");
      const int k = static_cast<int>(label.factor.den);
      if (k < 2) throw std::invalid_argument("slow factor must be 1/k with k >= 2");
      for (int i = 0; i < n; ++i) {
        emit(i);
        for (int j = 1; j < k; ++j) {
          if (blend_mode && i + 1 < n) {
            Frame f{out.sequence.size(),
                    blend(seq.frames[static_cast<std::size_t>(i)].image,
                          seq.frames[static_cast<std::size_t>(i + 1)].image, j, k),
                    ""};
            out.sequence.frames.push_back(std::move(f));
            out.source_indices.push_back(i);
          } else {
            emit(i);
          }
        }
      }
      break;
    }
    case Speed::normal:
      for (int i = 0; i < n; ++i) emit(i);
      break;
    case Speed::no_speed: {
      const MotionProfile profile = motion_profile(seq);
      const auto peak = std::max_element(profile.magnitudes.begin(), profile.magnitudes.end());
      const int freeze = static_cast<int>(peak - profile.magnitudes.begin()) + 1;
      for (int i = 0; i < n; ++i) emit(freeze);
      break;
    }
  }
  return out;
}

FrameSequence speed_transform(const FrameSequence& seq, const SpeedLabel& label, bool blend_mode) {
  return speed_variant(seq, label, blend_mode).sequence;
}

}  // namespace fragqa
