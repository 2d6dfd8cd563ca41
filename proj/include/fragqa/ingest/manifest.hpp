// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fragqa/ingest/frames.hpp"

namespace fragqa {

struct ManifestEntry {
  std::string video_id;
  std::filesystem::path frame_directory;
  int frame_count = 0;
  std::optional<std::string> metadata_target;
  std::optional<std::filesystem::path> presence_sidecar;
  std::optional<Rational> fps_hint;
  // Container file to run through the external decoder when the frame
  // directory has not been populated yet.
  std::optional<std::filesystem::path> video;
};

struct VideoManifest {
  int version = 1;
  std::vector<ManifestEntry> entries;
};

/// Parses a manifest; relative paths are resolved against the manifest's
/// directory. Throws ManifestError on schema problems or duplicate ids and
/// IngestError when the file cannot be read.
VideoManifest load_manifest(const std::filesystem::path& path);

/// Writes a manifest with paths relative to the manifest's directory.
void save_manifest(const VideoManifest& manifest, const std::filesystem::path& path);

/// Loads the frame directory of one entry. Frames are named by zero-padded
/// decimal index (000.png, 001.png, ...) starting at 0 with no gaps.
FrameSequence load_sequence(const ManifestEntry& entry);

/// Reads a presence sidecar {video_id, target, present:[bool...]} for `sequence`.
/// Throws AnnotationError when the video id or length disagree.
PresenceMap load_presence(const std::filesystem::path& path, const FrameSequence& sequence);

void save_presence(const PresenceMap& presence, const std::filesystem::path& path);

/// Runs the configured decoder command with {input} and {outdir} substituted.
/// Non-zero exit status throws IngestError.
void run_decoder(const std::string& command_template, const std::filesystem::path& input,
                 const std::filesystem::path& outdir);

}  // namespace fragqa
