// SPDX-License-Identifier: Apache-2.0

#include "fragqa/taskgen/task.hpp"

namespace fragqa {

std::string_view to_string(RangeMode mode) {
  switch (mode) {
    case RangeMode::any: return "any";
    case RangeMode::adjacent: return "adjacent";
    case RangeMode::nonadjacent: return "nonadjacent";
  }
  return "unknown";
}

std::optional<RangeMode> parse_range_mode(std::string_view name) {
  if (name == "any") return RangeMode::any;
  if (name == "adjacent") return RangeMode::adjacent;
  if (name == "nonadjacent") return RangeMode::nonadjacent;
  return std::nullopt;
}

const Option* OptionSet::find(std::string_view label) const {
  for (const auto& o : options) {
    if (o.label == label) return &o;
  }
  return nullptr;
}

std::string OptionSet::key_text() const {
  const Option* o = find(key_label);
  return o ? o->text : std::string();
}

std::string option_label(std::size_t i) {
  return std::string(1, static_cast<char>('A' + i));
}

}  // namespace fragqa
