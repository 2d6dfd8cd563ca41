// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fragqa/core/task_kind.hpp"

namespace fragqa {

// Purpose tag of a derived random stream. Every task kind has its own tag;
// the remaining tags cover non-task consumers.
enum class Stream : std::uint8_t {
  counting = 0,
  consistency,
  localization_first,
  localization_last,
  localization_exist,
  adjust_or_not,
  rearrangement,
  speed,
  plan,
  fixture,
  baseline,
};

Stream stream_for(TaskKind kind);

/// Identifies one random stream. Two equal keys always yield the same stream,
/// regardless of thread or generation order.
struct RngKey {
  std::uint64_t dataset_seed = 0;
  std::string video_id;
  Stream stream = Stream::plan;
  std::uint64_t instance_index = 0;

  bool operator==(const RngKey&) const = default;
};

/// Platform-stable 64-bit hash of a key (FNV-1a over a length-prefixed
/// encoding, finished with a splitmix64 round).
std::uint64_t stable_hash(const RngKey& key);

/// 16 lowercase hex digits of stable_hash(key).
std::string key_hex(const RngKey& key);

/// Random source with distribution code written out explicitly, so streams are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  explicit Rng(const RngKey& key) : engine_(stable_hash(key)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit();

  bool bernoulli(double p) { return unit() < p; }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  /// k distinct values from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace fragqa
