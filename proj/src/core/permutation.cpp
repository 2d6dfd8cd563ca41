// SPDX-License-Identifier: Apache-2.0

#include "fragqa/core/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fragqa {

Permutation::Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
  const int m = size();
  if (m < kMinSize || m > kMaxSize) {
    throw std::invalid_argument("permutation size " + std::to_string(m) + " outside [2, 8]");
  }
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int v : mapping_) {
    if (v < 0 || v >= m || seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("mapping is not a bijection on 0.." + std::to_string(m - 1));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int m) {
  std::vector<int> mapping(static_cast<std::size_t>(std::max(m, 0)));
  std::iota(mapping.begin(), mapping.end(), 0);
  return Permutation(std::move(mapping));
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    if (mapping_[i] != static_cast<int>(i)) return false;
  }
  return true;
}

std::string Permutation::to_display() const {
  std::string out;
  for (std::size_t i = 0; i < mapping_.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(mapping_[i] + 1);
  }
  return out;
}

Permutation Permutation::from_display(const std::string& text) {
  std::vector<int> mapping;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(' ');
    auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw std::invalid_argument("empty permutation entry in '" + text + "'");
    item = item.substr(b, e - b + 1);
    if (item.empty() || !std::all_of(item.begin(), item.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
        item.size() > 2) {
      throw std::invalid_argument("bad permutation entry '" + item + "'");
    }
    mapping.push_back(std::stoi(item) - 1);
  }
  return Permutation(std::move(mapping));
}

Permutation invert_permutation(const Permutation& p) {
  std::vector<int> inv(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) inv[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])] = i;
  return Permutation(std::move(inv));
}

Permutation random_permutation(int m, bool exclude_identity, Rng& rng) {
  if (m < Permutation::kMinSize) {
    throw std::invalid_argument("random_permutation: m must be >= 2, got " + std::to_string(m));
  }
  if (m > Permutation::kMaxSize) {
    throw std::invalid_argument("random_permutation: m must be <= 8, got " + std::to_string(m));
  }
  std::vector<int> mapping(static_cast<std::size_t>(m));
  constexpr int kMaxRetries = 64;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    std::iota(mapping.begin(), mapping.end(), 0);
    rng.shuffle(mapping);
    Permutation p(mapping);
    if (!exclude_identity || !p.is_identity()) return p;
  }
  std::swap(mapping[0], mapping[1]);
  return Permutation(std::move(mapping));
}

Permutation random_permutation(int m, bool exclude_identity, const RngKey& key) {
  Rng rng(key);
  return random_permutation(m, exclude_identity, rng);
}

std::vector<Permutation> all_permutations(int m) {
  std::vector<int> mapping(static_cast<std::size_t>(m));
  std::iota(mapping.begin(), mapping.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(mapping);
  } while (std::next_permutation(mapping.begin(), mapping.end()));
  return out;
}

}  // namespace fragqa
