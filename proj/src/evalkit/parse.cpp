// SPDX-License-Identifier: Apache-2.0

#include "fragqa/evalkit/parse.hpp"

#include <array>
#include <cctype>

namespace fragqa {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Uppercase letter at `pos` that labels an option and is not part of a word.
std::optional<std::string> letter_at(std::string_view text, std::size_t pos, const OptionSet& options) {
  if (pos >= text.size()) return std::nullopt;
  const char c = text[pos];
  if (c < 'A' || c > 'Z') return std::nullopt;
  if (pos + 1 < text.size() && is_word_char(text[pos + 1])) return std::nullopt;
  std::string label(1, c);
  if (!options.find(label)) return std::nullopt;
  return label;
}

bool bounded_find(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + 1)) {
    const bool left_ok = pos == 0 || !is_word_char(haystack[pos - 1]);
    const std::size_t end = pos + needle.size();
    const bool right_ok = end == haystack.size() || !is_word_char(haystack[end]);
    if (left_ok && right_ok) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(ParseRule rule) {
  switch (rule) {
    case ParseRule::leading_letter: return "leading_letter";
    case ParseRule::embedded_letter: return "embedded_letter";
    case ParseRule::option_text_match: return "option_text_match";
    case ParseRule::unparseable: return "unparseable";
  }
  return "unknown";
}

ParsedChoice parse_response(std::string_view text, const OptionSet& options) {
  // 1. leading letter
  std::size_t start = 0;
  while (start < text.size() && (std::isspace(static_cast<unsigned char>(text[start])) || text[start] == '(' ||
                                 text[start] == '[' || text[start] == '*' || text[start] == '"')) {
    ++start;
  }
  if (auto label = letter_at(text, start, options)) return {label, ParseRule::leading_letter};

  // 2. "answer is X" / "option X"
  const std::string low = lower(text);
  std::optional<std::pair<std::size_t, std::string>> best;
  for (std::string_view phrase : {std::string_view("answer is"), std::string_view("option")}) {
    for (auto pos = low.find(phrase); pos != std::string::npos; pos = low.find(phrase, pos + 1)) {
      if (pos > 0 && is_word_char(low[pos - 1])) continue;
      std::size_t at = pos + phrase.size();
      while (at < text.size() && (text[at] == ' ' || text[at] == ':' || text[at] == '(' || text[at] == '*')) ++at;
      if (auto label = letter_at(text, at, options)) {
        if (!best || pos < best->first) best = std::make_pair(pos, *label);
        break;
      }
    }
  }
  if (best) return {best->second, ParseRule::embedded_letter};

  // 3. unique option text
  std::optional<std::string> match;
  int hits = 0;
  for (const auto& o : options.options) {
    if (bounded_find(low, lower(o.text))) {
      ++hits;
      match = o.label;
    }
  }
  if (hits == 1) return {match, ParseRule::option_text_match};
  return {std::nullopt, ParseRule::unparseable};
}

}  // namespace fragqa
