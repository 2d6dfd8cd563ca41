// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace fragqa {

enum class TaskKind {
  counting,
  consistency,
  localization_first,
  localization_last,
  localization_exist,
  adjust_or_not,
  rearrangement,
  speed,
};

inline constexpr std::array<TaskKind, 8> kAllTaskKinds = {
    TaskKind::counting,           TaskKind::consistency,       TaskKind::localization_first,
    TaskKind::localization_last,  TaskKind::localization_exist, TaskKind::adjust_or_not,
    TaskKind::rearrangement,      TaskKind::speed,
};

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view name);

/// Number of answer options every instance of `kind` carries. Fixed so that
/// the chance level of a uniform guesser is 25% (four options) or 33.33%
/// (three options).
int option_cardinality(TaskKind kind);

/// Kinds whose presented frame order may differ from chronological order.
bool is_shuffled_kind(TaskKind kind);

bool is_localization(TaskKind kind);

}  // namespace fragqa
