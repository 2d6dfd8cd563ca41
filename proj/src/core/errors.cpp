// SPDX-License-Identifier: Apache-2.0

#include "fragqa/core/errors.hpp"

namespace fragqa {

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out = "unknown response ids:";
  for (const auto& id : ids) out += " " + id;
  return out;
}

}  // namespace

ScoringError::ScoringError(std::vector<std::string> ids) : Error(join_ids(ids)), ids_(std::move(ids)) {}

}  // namespace fragqa
