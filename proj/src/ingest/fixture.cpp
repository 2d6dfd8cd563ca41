// SPDX-License-Identifier: Apache-2.0

#include "fragqa/ingest/fixture.hpp"

#include <cstdio>
#include <stdexcept>

#include "fragqa/core/errors.hpp"
#include "fragqa/ingest/image_io.hpp"

namespace fragqa {

namespace fs = std::filesystem;

namespace {

constexpr int kBackgroundLo = 40;
constexpr int kBackgroundHi = 120;
constexpr std::uint8_t kMarkerValue = 255;

}  // namespace

Fixture synthesize_fixture(const FixtureSpec& spec, const RngKey& key) {
  const int n = spec.frame_count;
  if (n < 2) throw std::invalid_argument("fixture needs at least 2 frames");
  if (spec.width < 8 || spec.height < 8) throw std::invalid_argument("fixture frames must be at least 8x8");
  if (spec.marker_size < 1 || spec.marker_size > spec.width || spec.marker_size > spec.height) {
    throw std::invalid_argument("marker of size " + std::to_string(spec.marker_size) +
                                " does not fit a " + std::to_string(spec.width) + "x" +
                                std::to_string(spec.height) + " frame");
  }
  std::vector<bool> marker = spec.marker_schedule;
  if (marker.empty()) marker.assign(static_cast<std::size_t>(n), false);
  if (static_cast<int>(marker.size()) != n) {
    throw std::invalid_argument("marker_schedule must have frame_count entries");
  }
  std::vector<std::uint64_t> motion = spec.motion_schedule;
  if (motion.empty()) motion.assign(static_cast<std::size_t>(n - 1), 0);
  if (static_cast<int>(motion.size()) != n - 1) {
    throw std::invalid_argument("motion_schedule must have frame_count - 1 entries");
  }

  Rng rng(key);
  GrayImage base(spec.width, spec.height);
  for (auto& px : base.pixels) px = static_cast<std::uint8_t>(rng.between(kBackgroundLo, kBackgroundHi));

  const int mx = static_cast<int>(rng.between(0, spec.width - spec.marker_size));
  const int my = static_cast<int>(rng.between(0, spec.height - spec.marker_size));
  auto in_marker = [&](int x, int y) {
    return x >= mx && x < mx + spec.marker_size && y >= my && y < my + spec.marker_size;
  };

  std::uint64_t marker_mass = 0;
  std::vector<std::size_t> movable;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      if (in_marker(x, y)) {
        marker_mass += kMarkerValue - base.at(x, y);
      } else {
        movable.push_back(static_cast<std::size_t>(y) * spec.width + x);
      }
    }
  }
  rng.shuffle(movable);

  Fixture fx;
  fx.sequence.video_id = spec.video_id;
  fx.sequence.metadata_target = spec.target;
  fx.presence = PresenceMap{spec.video_id, spec.target, marker};
  fx.motion_truth.assign(static_cast<std::size_t>(n - 1), 0);

  // `current` carries the background and accumulated motion; the marker is
  // stamped on a copy so it never feeds back into the background.
  GrayImage current = base;
  std::size_t cursor = movable.empty() ? 0 : static_cast<std::size_t>(rng.below(movable.size()));
  auto stamp = [&](int t) {
    GrayImage img = current;
    if (marker[static_cast<std::size_t>(t)]) {
      for (int y = my; y < my + spec.marker_size; ++y) {
        for (int x = mx; x < mx + spec.marker_size; ++x) img.at(x, y) = kMarkerValue;
      }
    }
    return img;
  };

  fx.sequence.frames.push_back(Frame{0, stamp(0), ""});
  for (int t = 1; t < n; ++t) {
    std::uint64_t remaining = motion[static_cast<std::size_t>(t - 1)];
    std::size_t used = 0;
    while (remaining > 0) {
      if (used == movable.size()) {
        throw std::invalid_argument("motion mass " + std::to_string(motion[static_cast<std::size_t>(t - 1)]) +
                                    " exceeds what one transition of this frame size can carry");
      }
      std::uint8_t& px = current.pixels[movable[cursor]];
      cursor = (cursor + 1) % movable.size();
      ++used;
      const int up = 255 - px;
      const int down = px;
      const auto step = static_cast<int>(std::min<std::uint64_t>(remaining, static_cast<std::uint64_t>(std::max(up, down))));
      px = static_cast<std::uint8_t>(up >= down ? px + step : px - step);
      remaining -= static_cast<std::uint64_t>(step);
    }
    std::uint64_t truth = motion[static_cast<std::size_t>(t - 1)];
    if (marker[static_cast<std::size_t>(t)] != marker[static_cast<std::size_t>(t - 1)]) truth += marker_mass;
    fx.motion_truth[static_cast<std::size_t>(t - 1)] = truth;
    fx.sequence.frames.push_back(Frame{t, stamp(t), ""});
  }
  return fx;
}

ManifestEntry write_fixture(const Fixture& fixture, const fs::path& dir, bool with_sidecar) {
  const fs::path frames_dir = dir / fixture.sequence.video_id;
  std::error_code ec;
  fs::create_directories(frames_dir, ec);
  if (ec) throw IngestError("cannot create " + frames_dir.string() + ": " + ec.message());
  for (const Frame& f : fixture.sequence.frames) {
    char name[32];
    std::snprintf(name, sizeof name, "%03d.png", f.index);
    write_png(frames_dir / name, f.image);
  }

  ManifestEntry entry;
  entry.video_id = fixture.sequence.video_id;
  entry.frame_directory = frames_dir;
  entry.frame_count = fixture.sequence.size();
  entry.metadata_target = fixture.presence.target;
  if (with_sidecar) {
    const fs::path sidecar = dir / (fixture.sequence.video_id + ".presence.json");
    save_presence(fixture.presence, sidecar);
    entry.presence_sidecar = sidecar;
  }
  return entry;
}

}  // namespace fragqa
