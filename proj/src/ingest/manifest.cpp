// SPDX-License-Identifier: Apache-2.0

#include "fragqa/ingest/manifest.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "fragqa/core/errors.hpp"
#include "fragqa/ingest/image_io.hpp"

namespace fragqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kMinFrameSide = 8;

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ManifestError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T required(const json& obj, const char* field, const std::string& where) {
  if (!obj.contains(field)) throw ManifestError(where + ": missing field '" + field + "'");
  try {
    return obj.at(field).get<T>();
  } catch (const json::exception&) {
    throw ManifestError(where + ": field '" + field + "' has the wrong type");
  }
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

}  // namespace

bool PresenceMap::all_absent() const noexcept {
  return std::none_of(present.begin(), present.end(), [](bool b) { return b; });
}

VideoManifest load_manifest(const fs::path& path) {
  const json doc = read_json_file(path);
  const fs::path base = path.parent_path();
  if (!doc.is_object()) throw ManifestError(path.string() + ": manifest must be a JSON object");
  VideoManifest manifest;
  manifest.version = doc.value("version", 1);
  if (!doc.contains("entries") || !doc["entries"].is_array()) {
    throw ManifestError(path.string() + ": missing 'entries' array");
  }
  std::set<std::string> seen;
  for (const json& e : doc["entries"]) {
    const std::string where = path.string() + " entry " + std::to_string(manifest.entries.size());
    if (!e.is_object()) throw ManifestError(where + ": entry must be an object");
    ManifestEntry entry;
    entry.video_id = required<std::string>(e, "video_id", where);
    if (entry.video_id.empty()) throw ManifestError(where + ": empty video_id");
    if (!seen.insert(entry.video_id).second) {
      throw ManifestError(where + ": duplicate video_id '" + entry.video_id + "'");
    }
    entry.frame_directory = resolve(base, required<std::string>(e, "frame_directory", where));
    entry.frame_count = required<int>(e, "frame_count", where);
    if (entry.frame_count < 2) throw ManifestError(where + ": frame_count must be >= 2");
    if (e.contains("metadata_target") && !e["metadata_target"].is_null()) {
      entry.metadata_target = required<std::string>(e, "metadata_target", where);
    }
    if (e.contains("presence_sidecar") && !e["presence_sidecar"].is_null()) {
      entry.presence_sidecar = resolve(base, required<std::string>(e, "presence_sidecar", where));
    }
    if (e.contains("video") && !e["video"].is_null()) {
      entry.video = resolve(base, required<std::string>(e, "video", where));
    }
    if (e.contains("fps_hint") && !e["fps_hint"].is_null()) {
      auto pair = required<std::vector<std::int64_t>>(e, "fps_hint", where);
      if (pair.size() != 2 || pair[1] <= 0) throw ManifestError(where + ": fps_hint must be [num, den]");
      entry.fps_hint = Rational{pair[0], pair[1]};
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

void save_manifest(const VideoManifest& manifest, const fs::path& path) {
  const fs::path base = fs::absolute(path).parent_path();
  auto rel = [&](const fs::path& p) { return fs::absolute(p).lexically_relative(base).generic_string(); };
  json entries = json::array();
  for (const auto& e : manifest.entries) {
    json j = {{"video_id", e.video_id},
              {"frame_directory", rel(e.frame_directory)},
              {"frame_count", e.frame_count}};
    if (e.metadata_target) j["metadata_target"] = *e.metadata_target;
    if (e.presence_sidecar) j["presence_sidecar"] = rel(*e.presence_sidecar);
    if (e.video) j["video"] = rel(*e.video);
    if (e.fps_hint) j["fps_hint"] = {e.fps_hint->num, e.fps_hint->den};
    entries.push_back(std::move(j));
  }
  json doc = {{"version", manifest.version}, {"entries", std::move(entries)}};
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

FrameSequence load_sequence(const ManifestEntry& entry) {
  if (!fs::is_directory(entry.frame_directory)) {
    throw IngestError("frame directory not found: " + entry.frame_directory.string());
  }
  std::map<int, fs::path> by_index;
  for (const auto& dirent : fs::directory_iterator(entry.frame_directory)) {
    const fs::path& p = dirent.path();
    if (!dirent.is_regular_file() || !is_supported_image(p)) continue;
    const std::string stem = p.stem().string();
    if (!all_digits(stem) || stem.size() > 9) continue;
    const int index = std::stoi(stem);
    if (!by_index.emplace(index, p).second) {
      throw ManifestError(entry.video_id + ": two files map to frame index " + std::to_string(index));
    }
  }
  if (by_index.size() < 2) {
    throw ManifestError(entry.video_id + ": fewer than 2 frames in " + entry.frame_directory.string());
  }
  int expected = 0;
  for (const auto& [index, p] : by_index) {
    if (index != expected) {
      throw ManifestError(entry.video_id + ": frame index " + std::to_string(expected) + " missing in " +
                          entry.frame_directory.string());
    }
    ++expected;
  }
  if (static_cast<int>(by_index.size()) != entry.frame_count) {
    throw ManifestError(entry.video_id + ": manifest declares " + std::to_string(entry.frame_count) +
                        " frames, directory has " + std::to_string(by_index.size()));
  }

  FrameSequence seq;
  seq.video_id = entry.video_id;
  seq.fps_hint = entry.fps_hint;
  seq.metadata_target = entry.metadata_target;
  seq.frames.reserve(by_index.size());
  for (const auto& [index, p] : by_index) {
    Frame frame{index, read_gray_image(p), p.string()};
    if (frame.image.width < kMinFrameSide || frame.image.height < kMinFrameSide) {
      throw IngestError("frame smaller than 8x8: " + p.string());
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

PresenceMap load_presence(const fs::path& path, const FrameSequence& sequence) {
  json doc;
  try {
    doc = read_json_file(path);
  } catch (const ManifestError& e) {
    throw AnnotationError(e.what());
  } catch (const IngestError& e) {
    throw AnnotationError(e.what());
  }
  PresenceMap map;
  try {
    map.video_id = doc.at("video_id").get<std::string>();
    map.target = doc.at("target").get<std::string>();
    map.present = doc.at("present").get<std::vector<bool>>();
  } catch (const json::exception& e) {
    throw AnnotationError(path.string() + ": malformed sidecar: " + e.what());
  }
  if (map.video_id != sequence.video_id) {
    throw AnnotationError(path.string() + ": sidecar is for video '" + map.video_id + "', expected '" +
                          sequence.video_id + "'");
  }
  if (static_cast<int>(map.present.size()) != sequence.size()) {
    throw AnnotationError(path.string() + ": sidecar has " + std::to_string(map.present.size()) +
                          " entries for a " + std::to_string(sequence.size()) + "-frame video");
  }
  return map;
}

void save_presence(const PresenceMap& presence, const fs::path& path) {
  json doc = {{"video_id", presence.video_id}, {"target", presence.target}, {"present", presence.present}};
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  out << doc.dump() << '\n';
}

void run_decoder(const std::string& command_template, const fs::path& input, const fs::path& outdir) {
  if (command_template.find("{input}") == std::string::npos ||
      command_template.find("{outdir}") == std::string::npos) {
    throw std::invalid_argument("decoder template must contain {input} and {outdir}");
  }
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec) throw IngestError("cannot create " + outdir.string() + ": " + ec.message());
  std::string command = command_template;
  replace_all(command, "{input}", shell_quote(input.string()));
  replace_all(command, "{outdir}", shell_quote(outdir.string()));
  const int status = std::system(command.c_str());
  if (status != 0) {
    throw IngestError("decoder failed on " + input.string() + " (status " + std::to_string(status) + ")");
  }
}

}  // namespace fragqa
