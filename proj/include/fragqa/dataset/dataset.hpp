// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fragqa/dataset/record.hpp"

namespace fragqa {

struct EmitOptions {
  // Write queries.jsonl (no answers) + keys.jsonl instead of data.jsonl.
  bool strip_answers = false;
};

struct EmittedFiles {
  std::vector<std::filesystem::path> paths;
};

/// Writes records sorted by id as JSON Lines plus manifest.json. Manifest
/// counts are recomputed from `records`. Identical inputs give identical
/// bytes. Throws EmitError on duplicate ids or write failures.
EmittedFiles emit(std::vector<DatasetRecord> records, DatasetManifest manifest, const std::filesystem::path& out_dir,
                  EmitOptions options = {});

struct LoadedDataset {
  DatasetManifest manifest;
  std::vector<DatasetRecord> records;
  // True when only a query file without keys was available.
  bool query_only = false;
};

struct ValidateOptions {
  bool check_frame_files = true;
};

/// Checks one record's invariants. Throws ValidationError.
void validate_record(const DatasetRecord& record, const std::filesystem::path& root,
                     const ValidateOptions& options = {});

/// Reads and validates a dataset directory written by emit(). Every failure
/// throws ValidationError naming the record id and field.
LoadedDataset load_and_validate(const std::filesystem::path& dir, ValidateOptions options = {});

}  // namespace fragqa
