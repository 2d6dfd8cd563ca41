// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fragqa/augment/speed.hpp"
#include "fragqa/dataset/record.hpp"
#include "fragqa/sampler/sampling.hpp"
#include "fragqa/taskgen/task.hpp"

namespace fragqa {

/// Task families selectable with --tasks. Localization covers the first, last
/// and exist variants; each fragment gets one of them, rotating with the set
/// id.
enum class TaskFamily { counting, consistency, localization, adjust_or_not, rearrangement, speed };

std::string_view to_string(TaskFamily f);
/// Parses a comma-separated list; "all" selects every family.
std::set<TaskFamily> parse_task_families(std::string_view list);

struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::uint64_t dataset_seed = 0;
  int n_sets = 3;
  int m_min = 3;
  int m_max = 5;
  Strategy strategy = Strategy::motion_salient;
  bool salient_midpoints = false;
  RangeMode range_mode = RangeMode::any;
  double p_same = 0.5;
  double p_shuffle = 0.5;
  SpeedConfig speed;
  // Augmented variants asked about in addition to the original (normal) clip.
  std::vector<Speed> speed_variants = {Speed::fast, Speed::slow};
  std::set<TaskFamily> tasks = {TaskFamily::counting,      TaskFamily::consistency,   TaskFamily::localization,
                                TaskFamily::adjust_or_not, TaskFamily::rearrangement, TaskFamily::speed};
  bool strip_answers = false;
  std::optional<int> downscale;
  int workers = 1;
  std::optional<std::filesystem::path> templates;
  std::optional<std::string> decoder;

  void validate() const;
  /// Output-affecting settings, recorded in the dataset manifest.
  nlohmann::json to_json() const;
};

struct GenerateSummary {
  int videos = 0;
  int videos_failed = 0;
  int records = 0;
  std::map<TaskKind, int> counts;
  std::vector<LogEntry> skips;
  std::vector<LogEntry> warnings;

  bool all_failed() const { return videos > 0 && videos_failed == videos; }
  std::string line() const;
};

/// Runs ingest, sampling, augmentation, task generation and emission for
/// every manifest entry. Output bytes do not depend on config.workers.
/// Throws ManifestError / IngestError when the manifest itself is unusable.
GenerateSummary generate_dataset(const PipelineConfig& config);

}  // namespace fragqa
