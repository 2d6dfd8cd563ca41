// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fragqa/augment/speed.hpp"
#include "fragqa/core/task_kind.hpp"
#include "fragqa/sampler/sampling.hpp"

namespace fragqa {

enum class RangeMode { any, adjacent, nonadjacent };

std::string_view to_string(RangeMode mode);
std::optional<RangeMode> parse_range_mode(std::string_view name);

struct Option {
  std::string label;
  std::string text;

  bool operator==(const Option&) const = default;
};

struct OptionSet {
  std::vector<Option> options;
  std::string key_label;

  const Option* find(std::string_view label) const;
  /// Text of the keyed option; empty if the key label is not present.
  std::string key_text() const;

  bool operator==(const OptionSet&) const = default;
};

/// "A", "B", ... for position i.
std::string option_label(std::size_t i);

struct TaskMeta {
  int m = 0;  // fragment size (or presented frame count for speed)
  std::optional<int> set_id;
  std::optional<std::string> fragment_id;
  std::optional<Strategy> strategy;
  std::optional<RangeMode> range_mode;
  std::optional<Speed> speed_label;
  std::optional<std::vector<int>> permutation;
  std::optional<std::string> target;

  bool operator==(const TaskMeta&) const = default;
};

struct TaskInstance {
  std::string id;
  TaskKind kind = TaskKind::counting;
  std::string video_id;
  std::vector<int> presented_indices;
  std::string question;
  OptionSet option_set;
  TaskMeta meta;

  const std::string& answer() const noexcept { return option_set.key_label; }

  bool operator==(const TaskInstance&) const = default;
};

}  // namespace fragqa
