// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fragqa/core/rng.hpp"

namespace fragqa {

/// A bijection on {0..m-1}, 2 <= m <= 8. Applying it to a sequence `s`
/// produces `presented` with presented[i] = s[mapping[i]], i.e. mapping[i]
/// names the source element shown in slot i.
class Permutation {
 public:
  static constexpr int kMinSize = 2;
  static constexpr int kMaxSize = 8;

  explicit Permutation(std::vector<int> mapping);

  static Permutation identity(int m);

  int size() const noexcept { return static_cast<int>(mapping_.size()); }
  std::span<const int> mapping() const noexcept { return mapping_; }
  int operator[](std::size_t i) const { return mapping_[i]; }
  bool is_identity() const noexcept;

  /// "2, 3, 1" style rendering with 1-based entries.
  std::string to_display() const;

  /// Parses to_display() output back. Throws std::invalid_argument.
  static Permutation from_display(const std::string& text);

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<int> mapping_;
};

template <typename T>
std::vector<T> apply_permutation(const Permutation& p, std::span<const T> s) {
  if (s.size() != static_cast<std::size_t>(p.size())) {
    throw std::invalid_argument("apply_permutation: permutation of size " +
                                std::to_string(p.size()) + " applied to sequence of length " +
                                std::to_string(s.size()));
  }
  std::vector<T> out;
  out.reserve(s.size());
  for (int src : p.mapping()) out.push_back(s[static_cast<std::size_t>(src)]);
  return out;
}

template <typename T>
std::vector<T> apply_permutation(const Permutation& p, const std::vector<T>& s) {
  return apply_permutation(p, std::span<const T>(s));
}

Permutation invert_permutation(const Permutation& p);

/// Uniform permutation of size m. With exclude_identity the identity is
/// rejected up to 64 times, after which the first two slots of the last draw
/// are swapped.
Permutation random_permutation(int m, bool exclude_identity, Rng& rng);
Permutation random_permutation(int m, bool exclude_identity, const RngKey& key);

/// All m! permutations in lexicographic order (m <= 8).
std::vector<Permutation> all_permutations(int m);

}  // namespace fragqa
