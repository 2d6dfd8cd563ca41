// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fragqa/taskgen/task.hpp"

namespace fragqa {

inline constexpr std::string_view kGeneratorVersion = "fragqa 1.0.0";

inline constexpr const char* kDataFileName = "data.jsonl";
inline constexpr const char* kQueryFileName = "queries.jsonl";
inline constexpr const char* kKeyFileName = "keys.jsonl";
inline constexpr const char* kManifestFileName = "manifest.json";

struct DatasetRecord {
  TaskInstance instance;
  std::vector<std::string> frame_refs;  // relative to the dataset root, presentation order
  std::string generator_version{kGeneratorVersion};
  std::uint64_t dataset_seed = 0;
  // False for records read from a query-only file without its key file.
  bool has_answer = true;

  bool operator==(const DatasetRecord&) const = default;
};

struct LogEntry {
  std::string video_id;
  std::string reason;

  bool operator==(const LogEntry&) const = default;
};

struct DatasetManifest {
  int version = 1;
  std::string generator_version{kGeneratorVersion};
  std::uint64_t dataset_seed = 0;
  std::map<TaskKind, int> counts;
  std::vector<std::string> videos;
  std::vector<LogEntry> skips;
  std::vector<LogEntry> warnings;
  nlohmann::json config = nlohmann::json::object();
  bool answers_stripped = false;

  int total() const;
};

/// Field names: id, kind, video_id, frame_refs, presented_indices, question,
/// options [{label, text}], answer, meta, generator_version, dataset_seed.
/// Keys are emitted in sorted order. With include_answer=false the answer and
/// the meta fields that reveal it (permutation, speed_label) are left out.
nlohmann::json record_to_json(const DatasetRecord& record, bool include_answer = true);

/// Schema-level decoding. Throws ValidationError naming the record id and
/// field.
DatasetRecord record_from_json(const nlohmann::json& j, bool answer_required = true);

nlohmann::json manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);

}  // namespace fragqa
