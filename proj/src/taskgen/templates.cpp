// SPDX-License-Identifier: Apache-2.0

#include "fragqa/taskgen/templates.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fragqa/core/errors.hpp"

namespace fragqa {

namespace {

constexpr std::string_view kDefaultBank = R"(# Built-in question templates.
[counting]
Could you please tell me how many frames I have inputted?
[consistency]
Are the two frames I provided exactly the same?
[localization_first]
In the sequence of frames provided, on which frame does the object first appear?
[localization_last]
In the sequence of frames provided, on which frame does the object last appear?
[localization_exist]
In the sequence of frames provided, in which frames does the object exist?
[adjust_or_not]
These frames are all from the same video and capture the dynamic process of an action. The order of these frames may have been mixed up. Do we need to rearrange them to match the normal execution sequence of the action?
[rearrangement]
These frames are all from the same video and depict the dynamic process of an action. The order of these frames may have been mixed up. Based on the connections between the image frames, which of the following options represents the most appropriate sequence?
[speed]
What is the rate of movement in the video?
)";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string render_template(std::string_view tmpl, std::string_view target) {
  static constexpr std::string_view kPlaceholder = "{target}";
  std::string out(tmpl);
  for (auto pos = out.find(kPlaceholder); pos != std::string::npos;
       pos = out.find(kPlaceholder, pos + target.size())) {
    out.replace(pos, kPlaceholder.size(), target);
  }
  return out;
}

const TemplateBank& TemplateBank::defaults() {
  static const TemplateBank bank = parse(kDefaultBank);
  return bank;
}

TemplateBank TemplateBank::parse(std::string_view text) {
  TemplateBank bank;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::optional<TaskKind> section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = parse_task_kind(std::string_view(line).substr(1, line.size() - 2));
      if (!section) throw std::invalid_argument("template bank line " + std::to_string(line_no) + ": unknown section " + line);
      continue;
    }
    if (!section) {
      throw std::invalid_argument("template bank line " + std::to_string(line_no) + ": template outside a section");
    }
    bank.by_kind_[*section].push_back(line);
  }
  return bank;
}

TemplateBank TemplateBank::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open template file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void TemplateBank::merge(const TemplateBank& extra) {
  for (const auto& [kind, list] : extra.by_kind_) {
    auto& dst = by_kind_[kind];
    for (const auto& t : list) {
      if (std::find(dst.begin(), dst.end(), t) == dst.end()) dst.push_back(t);
    }
  }
}

const std::vector<std::string>& TemplateBank::templates(TaskKind kind) const {
  static const std::vector<std::string> kEmpty;
  auto it = by_kind_.find(kind);
  return it == by_kind_.end() ? kEmpty : it->second;
}

bool TemplateBank::contains(TaskKind kind, std::string_view question, std::string_view target) const {
  for (const auto& t : templates(kind)) {
    if (render_template(t, target) == question) return true;
  }
  return false;
}

std::string TemplateBank::to_text() const {
  std::string out;
  for (const auto& [kind, list] : by_kind_) {
    out += "[" + std::string(to_string(kind)) + "]\n";
    for (const auto& t : list) out += t + "\n";
  }
  return out;
}

}  // namespace fragqa
