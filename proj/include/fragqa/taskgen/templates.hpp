// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fragqa/core/task_kind.hpp"

namespace fragqa {

/// Question templates per task kind. A template may contain the placeholder
/// {target}, replaced by the localization target when rendered.
///
/// Text format: a "[kind]" header line opens a section; every following
/// non-blank line not starting with '#' is one template.
class TemplateBank {
 public:
  /// Built-in question wording, one template per kind.
  static const TemplateBank& defaults();

  static TemplateBank parse(std::string_view text);
  static TemplateBank load(const std::filesystem::path& path);

  /// Adds the templates of `extra` after the existing ones.
  void merge(const TemplateBank& extra);

  const std::vector<std::string>& templates(TaskKind kind) const;

  /// True when `question` is the rendering of some template of `kind`.
  bool contains(TaskKind kind, std::string_view question, std::string_view target = {}) const;

  std::string to_text() const;

 private:
  std::map<TaskKind, std::vector<std::string>> by_kind_;
};

std::string render_template(std::string_view tmpl, std::string_view target);

}  // namespace fragqa
