// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>

#include <gtest/gtest.h>
#include <png.h>

#include "fragqa/core/errors.hpp"
#include "fragqa/core/rng.hpp"
#include "fragqa/ingest/fixture.hpp"
#include "fragqa/ingest/image_io.hpp"
#include "fragqa/ingest/manifest.hpp"
#include "test_util.hpp"

namespace fragqa {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct Rgb {
  std::uint8_t r, g, b;
};

// Exact rational half-up rounding of 0.299R + 0.587G + 0.114B.
int luma_oracle(const Rgb& p) {
  const long numerator = 299L * p.r + 587L * p.g + 114L * p.b;
  const long whole = numerator / 1000;
  const long remainder = numerator % 1000;
  return static_cast<int>(2 * remainder >= 1000 ? whole + 1 : whole);
}

std::vector<Rgb> random_rgb(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Rgb> px;
  for (int i = 0; i < n; ++i) {
    px.push_back({static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                  static_cast<std::uint8_t>(rng.below(256))});
  }
  return px;
}

void write_ppm(const fs::path& path, int w, int h, const std::vector<Rgb>& px) {
  std::string data = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  for (const Rgb& p : px) {
    data.push_back(static_cast<char>(p.r));
    data.push_back(static_cast<char>(p.g));
    data.push_back(static_cast<char>(p.b));
  }
  testing::write_file(path, data);
}

void write_rgb_png(const fs::path& path, int w, int h, const std::vector<Rgb>& px) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buf;
  for (const Rgb& p : px) buf.insert(buf.end(), {p.r, p.g, p.b});
  ASSERT_TRUE(png_image_write_to_file(&image, path.c_str(), 0, buf.data(), 0, nullptr));
}

void write_gray_frames(const fs::path& dir, int n, int size = 8) {
  fs::create_directories(dir);
  for (int i = 0; i < n; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "%03d.png", i);
    write_png(dir / name, GrayImage(size, size, static_cast<std::uint8_t>(10 * i)));
  }
}

ManifestEntry entry_for(const fs::path& dir, int n, const std::string& id = "clip") {
  ManifestEntry e;
  e.video_id = id;
  e.frame_directory = dir;
  e.frame_count = n;
  return e;
}

TEST(ImageIoTest, LumaMatchesOracleOnPpm) {
  TempDir tmp;
  const auto px = random_rgb(100, 11);
  write_ppm(tmp / "frame.ppm", 10, 10, px);
  const GrayImage img = read_gray_image(tmp / "frame.ppm");
  ASSERT_EQ(img.width, 10);
  ASSERT_EQ(img.height, 10);
  for (std::size_t i = 0; i < px.size(); ++i) EXPECT_EQ(img.pixels[i], luma_oracle(px[i])) << i;
}

TEST(ImageIoTest, LumaMatchesOracleOnColorPng) {
  TempDir tmp;
  const auto px = random_rgb(100, 12);
  write_rgb_png(tmp / "frame.png", 10, 10, px);
  const GrayImage img = read_gray_image(tmp / "frame.png");
  for (std::size_t i = 0; i < px.size(); ++i) EXPECT_EQ(img.pixels[i], luma_oracle(px[i])) << i;
}

TEST(ImageIoTest, LumaRoundsHalfUp) {
  // 299*1 + 587*1 + 114*0 = 886 -> 0.886 rounds to 1; 500/1000 ties upward.
  EXPECT_EQ(luma(1, 1, 0), 1);
  EXPECT_EQ(luma(255, 255, 255), 255);
  EXPECT_EQ(luma(0, 0, 0), 0);
  for (const Rgb& p : random_rgb(1000, 13)) EXPECT_EQ(luma(p.r, p.g, p.b), luma_oracle(p));
}

TEST(ImageIoTest, GrayPngRoundTrip) {
  TempDir tmp;
  GrayImage img(9, 7);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = static_cast<std::uint8_t>(i * 3);
  write_png(tmp / "g.png", img);
  EXPECT_EQ(read_gray_image(tmp / "g.png"), img);
}

TEST(ImageIoTest, CorruptFileNamesTheFile) {
  TempDir tmp;
  testing::write_file(tmp / "bad.png", "not a png at all");
  try {
    read_gray_image(tmp / "bad.png");
    FAIL() << "expected IngestError";
  } catch (const IngestError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.png"), std::string::npos);
  }
  EXPECT_THROW(read_gray_image(tmp / "missing.png"), IngestError);
}

TEST(LoadSequenceTest, ContiguousDirectory) {
  TempDir tmp;
  write_gray_frames(tmp / "clip", 10);
  const FrameSequence seq = load_sequence(entry_for(tmp / "clip", 10));
  ASSERT_EQ(seq.size(), 10);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(seq.frames[static_cast<std::size_t>(i)].index, i);
    EXPECT_EQ(seq.frames[static_cast<std::size_t>(i)].image.pixels[0], 10 * i);
  }
}

TEST(LoadSequenceTest, GapIsManifestError) {
  TempDir tmp;
  write_gray_frames(tmp / "clip", 10);
  fs::remove(tmp / "clip" / "003.png");
  EXPECT_THROW(load_sequence(entry_for(tmp / "clip", 9)), ManifestError);
}

TEST(LoadSequenceTest, CountMismatchIsManifestError) {
  TempDir tmp;
  write_gray_frames(tmp / "clip", 10);
  EXPECT_THROW(load_sequence(entry_for(tmp / "clip", 11)), ManifestError);
}

TEST(LoadSequenceTest, MissingDirectoryIsIngestError) {
  TempDir tmp;
  EXPECT_THROW(load_sequence(entry_for(tmp / "nope", 3)), IngestError);
}

TEST(LoadSequenceTest, IsPureInDirectoryContents) {
  TempDir tmp;
  write_gray_frames(tmp / "clip", 5);
  const auto a = load_sequence(entry_for(tmp / "clip", 5));
  const auto b = load_sequence(entry_for(tmp / "clip", 5));
  ASSERT_EQ(a.size(), b.size());
  for (int i = 0; i < a.size(); ++i) EXPECT_EQ(a.frames[i].image, b.frames[i].image);
}

TEST(ManifestTest, RoundTripResolvesRelativePaths) {
  TempDir tmp;
  write_gray_frames(tmp / "frames" / "a", 4);
  testing::write_file(tmp / "manifest.json",
                      R"({"version": 1, "entries": [{"video_id": "a", "frame_directory": "frames/a",)"
                      R"( "frame_count": 4, "metadata_target": "dog", "fps_hint": [30000, 1001]}]})");
  const VideoManifest m = load_manifest(tmp / "manifest.json");
  ASSERT_EQ(m.entries.size(), 1u);
  EXPECT_EQ(m.entries[0].frame_directory, tmp / "frames" / "a");
  EXPECT_EQ(m.entries[0].metadata_target, "dog");
  ASSERT_TRUE(m.entries[0].fps_hint.has_value());
  EXPECT_EQ(m.entries[0].fps_hint->den, 1001);
  EXPECT_EQ(load_sequence(m.entries[0]).size(), 4);

  save_manifest(m, tmp / "copy.json");
  const VideoManifest again = load_manifest(tmp / "copy.json");
  EXPECT_EQ(again.entries[0].frame_directory, m.entries[0].frame_directory);
}

TEST(ManifestTest, DuplicateIdsAndBadJsonRejected) {
  TempDir tmp;
  testing::write_file(tmp / "dup.json",
                      R"({"version": 1, "entries": [{"video_id": "a", "frame_directory": "x", "frame_count": 3},)"
                      R"({"video_id": "a", "frame_directory": "y", "frame_count": 3}]})");
  EXPECT_THROW(load_manifest(tmp / "dup.json"), ManifestError);
  testing::write_file(tmp / "bad.json", "{not json");
  EXPECT_THROW(load_manifest(tmp / "bad.json"), ManifestError);
  EXPECT_THROW(load_manifest(tmp / "absent.json"), IngestError);
}

class PresenceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    write_gray_frames(tmp_ / "clip", 3);
    seq_ = load_sequence(entry_for(tmp_ / "clip", 3));
  }
  TempDir tmp_;
  FrameSequence seq_;
};

TEST_F(PresenceTest, MatchingSidecarLoads) {
  testing::write_file(tmp_ / "p.json", R"({"video_id": "clip", "target": "cat", "present": [true, true, false]})");
  const PresenceMap p = load_presence(tmp_ / "p.json", seq_);
  EXPECT_EQ(p.present, (std::vector<bool>{true, true, false}));
  EXPECT_EQ(p.target, "cat");
  EXPECT_FALSE(p.all_absent());
}

TEST_F(PresenceTest, LengthMismatchIsAnnotationError) {
  testing::write_file(tmp_ / "p.json",
                      R"({"video_id": "clip", "target": "cat", "present": [true, true, false, false]})");
  EXPECT_THROW(load_presence(tmp_ / "p.json", seq_), AnnotationError);
}

TEST_F(PresenceTest, WrongVideoIsAnnotationError) {
  testing::write_file(tmp_ / "p.json", R"({"video_id": "other", "target": "cat", "present": [true, true, false]})");
  EXPECT_THROW(load_presence(tmp_ / "p.json", seq_), AnnotationError);
}

TEST_F(PresenceTest, AllFalseFlagged) {
  testing::write_file(tmp_ / "p.json", R"({"video_id": "clip", "target": "cat", "present": [false, false, false]})");
  EXPECT_TRUE(load_presence(tmp_ / "p.json", seq_).all_absent());
}

std::uint64_t abs_diff_sum(const GrayImage& a, const GrayImage& b) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) s += static_cast<std::uint64_t>(std::abs(a.pixels[i] - b.pixels[i]));
  return s;
}

TEST(FixtureTest, AllFalseMarkerScheduleIsMarkerFree) {
  FixtureSpec spec;
  spec.marker_schedule.assign(10, false);
  const Fixture fx = synthesize_fixture(spec, RngKey{1, "fixture", Stream::fixture, 0});
  EXPECT_TRUE(fx.presence.all_absent());
  for (const Frame& f : fx.sequence.frames) {
    for (auto px : f.image.pixels) EXPECT_LT(px, 255);
  }
}

TEST(FixtureTest, ZeroMotionGivesIdenticalFrames) {
  FixtureSpec spec;
  const Fixture fx = synthesize_fixture(spec, RngKey{1, "fixture", Stream::fixture, 0});
  for (int t = 1; t < spec.frame_count; ++t) EXPECT_EQ(fx.sequence.frames[t].image, fx.sequence.frames[0].image);
}

TEST(FixtureTest, MotionOnlyOnScheduledTransition) {
  FixtureSpec spec;
  spec.motion_schedule = {0, 0, 0, 0, 0, 0, 0, 0, 777};
  const Fixture fx = synthesize_fixture(spec, RngKey{2, "fixture", Stream::fixture, 0});
  for (int t = 1; t < spec.frame_count; ++t) {
    const auto d = abs_diff_sum(fx.sequence.frames[t - 1].image, fx.sequence.frames[t].image);
    EXPECT_EQ(d, t == 9 ? 777u : 0u) << t;
  }
}

TEST(FixtureTest, MotionTruthMatchesEmittedPixels) {
  FixtureSpec spec;
  spec.frame_count = 12;
  spec.marker_schedule = {false, false, true, true, true, false, false, true, true, false, false, false};
  spec.motion_schedule = {5, 90, 0, 1000, 3, 3, 17, 250, 0, 44, 6};
  const Fixture fx = synthesize_fixture(spec, RngKey{3, "fixture", Stream::fixture, 0});
  for (int t = 1; t < spec.frame_count; ++t) {
    EXPECT_EQ(abs_diff_sum(fx.sequence.frames[t - 1].image, fx.sequence.frames[t].image), fx.motion_truth[t - 1]);
  }
}

TEST(FixtureTest, OversizedMarkerIsInvalid) {
  FixtureSpec spec;
  spec.marker_size = 40;
  EXPECT_THROW(synthesize_fixture(spec, RngKey{}), std::invalid_argument);
}

TEST(FixtureTest, WrittenFixtureLoadsBack) {
  TempDir tmp;
  FixtureSpec spec;
  spec.video_id = "fx";
  spec.marker_schedule = {true, false, false, true, false, false, false, false, false, true};
  spec.motion_schedule.assign(9, 20);
  const Fixture fx = synthesize_fixture(spec, RngKey{4, "fx", Stream::fixture, 0});
  const ManifestEntry e = write_fixture(fx, tmp.path());
  const FrameSequence seq = load_sequence(e);
  ASSERT_EQ(seq.size(), 10);
  for (int t = 0; t < 10; ++t) EXPECT_EQ(seq.frames[t].image, fx.sequence.frames[t].image);
  ASSERT_TRUE(e.presence_sidecar.has_value());
  EXPECT_EQ(load_presence(*e.presence_sidecar, seq).present, spec.marker_schedule);
}

TEST(DecoderTest, SuccessfulCommandProducesFrames) {
  TempDir tmp;
  write_gray_frames(tmp / "src", 3);
  run_decoder("cp {input}/*.png {outdir}/", tmp / "src", tmp / "out");
  EXPECT_EQ(load_sequence(entry_for(tmp / "out", 3)).size(), 3);
}

TEST(DecoderTest, NonZeroExitIsIngestError) {
  TempDir tmp;
  EXPECT_THROW(run_decoder("false {input} {outdir}", tmp / "in.mp4", tmp / "out"), IngestError);
}

}  // namespace
}  // namespace fragqa
