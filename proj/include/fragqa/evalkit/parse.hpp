// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fragqa/taskgen/task.hpp"

namespace fragqa {

enum class ParseRule { leading_letter, embedded_letter, option_text_match, unparseable };

std::string_view to_string(ParseRule rule);

struct ParsedChoice {
  std::optional<std::string> label;  // empty when unparseable
  ParseRule rule = ParseRule::unparseable;

  bool operator==(const ParsedChoice&) const = default;
};

/// Rules in order of precedence:
///   1. a standalone option letter at the start ("B", "(C)", "D. slow");
///   2. "answer is X" or "option X" anywhere (phrase case-insensitive, letter
///      uppercase);
///   3. exactly one option text occurring as a whole-word, case-insensitive
///      substring.
/// Only letters that label an option of `options` count.
ParsedChoice parse_response(std::string_view text, const OptionSet& options);

}  // namespace fragqa
