// SPDX-License-Identifier: Apache-2.0

#include "fragqa/core/task_kind.hpp"

namespace fragqa {

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::counting: return "counting";
    case TaskKind::consistency: return "consistency";
    case TaskKind::localization_first: return "localization_first";
    case TaskKind::localization_last: return "localization_last";
    case TaskKind::localization_exist: return "localization_exist";
    case TaskKind::adjust_or_not: return "adjust_or_not";
    case TaskKind::rearrangement: return "rearrangement";
    case TaskKind::speed: return "speed";
  }
  return "unknown";
}

std::optional<TaskKind> parse_task_kind(std::string_view name) {
  for (TaskKind kind : kAllTaskKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

int option_cardinality(TaskKind kind) {
  switch (kind) {
    case TaskKind::consistency:
    case TaskKind::adjust_or_not:
      return 3;
    default:
      return 4;
  }
}

bool is_shuffled_kind(TaskKind kind) {
  return kind == TaskKind::adjust_or_not || kind == TaskKind::rearrangement;
}

bool is_localization(TaskKind kind) {
  return kind == TaskKind::localization_first || kind == TaskKind::localization_last ||
         kind == TaskKind::localization_exist;
}

}  // namespace fragqa
