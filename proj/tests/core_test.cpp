// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "fragqa/core/permutation.hpp"
#include "fragqa/core/rng.hpp"
#include "fragqa/core/task_kind.hpp"
#include "test_util.hpp"

namespace fragqa {
namespace {

// Brute-force inverse: the q with apply(q, apply(p, s)) == s, searched over all m! candidates.
Permutation brute_force_inverse(const Permutation& p) {
  std::vector<int> s(static_cast<std::size_t>(p.size()));
  std::iota(s.begin(), s.end(), 100);
  const auto shuffled = apply_permutation(p, s);
  for (const auto& q : all_permutations(p.size())) {
    if (apply_permutation(q, shuffled) == s) return q;
  }
  throw std::logic_error("no inverse found");
}

TEST(PermutationTest, ApplyIdentity) {
  const std::vector<std::string> s = {"f0", "f1", "f2"};
  EXPECT_EQ(apply_permutation(Permutation({0, 1, 2}), s), s);
}

TEST(PermutationTest, ApplyFollowsConvention) {
  const std::vector<std::string> s = {"f0", "f1", "f2"};
  EXPECT_EQ(apply_permutation(Permutation({2, 0, 1}), s), (std::vector<std::string>{"f2", "f0", "f1"}));
}

TEST(PermutationTest, ApplyLengthMismatchThrows) {
  const std::vector<int> s = {1, 2};
  EXPECT_THROW(apply_permutation(Permutation({2, 0, 1}), s), std::invalid_argument);
}

TEST(PermutationTest, InvertExamples) {
  EXPECT_EQ(invert_permutation(Permutation({0, 1, 2})), Permutation({0, 1, 2}));
  EXPECT_EQ(invert_permutation(Permutation({2, 0, 1})), Permutation({1, 2, 0}));
  EXPECT_EQ(brute_force_inverse(Permutation({2, 0, 1})), Permutation({1, 2, 0}));
}

TEST(PermutationTest, InvertMatchesBruteForceExhaustively) {
  for (int m = 2; m <= 5; ++m) {
    for (const auto& p : all_permutations(m)) {
      const auto inv = invert_permutation(p);
      EXPECT_EQ(inv, brute_force_inverse(p)) << p.to_display();
      EXPECT_EQ(invert_permutation(inv), p);
    }
  }
}

TEST(PermutationTest, AllPermutationsCount) {
  EXPECT_EQ(all_permutations(2).size(), 2u);
  EXPECT_EQ(all_permutations(3).size(), 6u);
  EXPECT_EQ(all_permutations(5).size(), 120u);
}

TEST(PermutationTest, RejectsNonBijection) {
  EXPECT_THROW(Permutation({0, 0, 1}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 1, 3}), std::invalid_argument);
  EXPECT_THROW(Permutation({0}), std::invalid_argument);
}

TEST(PermutationTest, DisplayRoundTrip) {
  const Permutation p({1, 2, 0});
  EXPECT_EQ(p.to_display(), "2, 3, 1");
  EXPECT_EQ(Permutation::from_display("2, 3, 1"), p);
  EXPECT_THROW(Permutation::from_display("1, 1, 2"), std::invalid_argument);
}

TEST(RandomPermutationTest, SizeTwoExcludingIdentity) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    EXPECT_EQ(random_permutation(2, true, RngKey{1, "v", Stream::rearrangement, i}), Permutation({1, 0}));
  }
}

TEST(RandomPermutationTest, MSmallerThanTwoThrows) {
  Rng rng(1);
  EXPECT_THROW(random_permutation(1, false, rng), std::invalid_argument);
}

TEST(RandomPermutationTest, SameKeySameOutput) {
  const RngKey key{42, "clip", Stream::adjust_or_not, 7};
  EXPECT_EQ(random_permutation(5, true, key), random_permutation(5, true, key));
}

TEST(RandomPermutationTest, NeverIdentityAndRoughlyUniform) {
  // 3! - 1 = 5 non-identity permutations, each expected with p = 1/5.
  constexpr int kDraws = 10000;
  std::map<std::string, int> freq;
  Rng rng(2024);
  for (int i = 0; i < kDraws; ++i) {
    const auto p = random_permutation(3, true, rng);
    ASSERT_FALSE(p.is_identity());
    ++freq[p.to_display()];
  }
  ASSERT_EQ(freq.size(), 5u);
  for (const auto& [text, n] : freq) EXPECT_TRUE(testing::within_sigma(n, kDraws, 0.2, 4.0)) << text << " " << n;
}

TEST(RngTest, KeyFieldsAllAffectStream) {
  const RngKey base{1, "video", Stream::counting, 0};
  std::set<std::uint64_t> seen{stable_hash(base)};
  RngKey k = base;
  k.dataset_seed = 2;
  seen.insert(stable_hash(k));
  k = base;
  k.video_id = "video2";
  seen.insert(stable_hash(k));
  k = base;
  k.stream = Stream::consistency;
  seen.insert(stable_hash(k));
  k = base;
  k.instance_index = 1;
  seen.insert(stable_hash(k));
  EXPECT_EQ(seen.size(), 5u);
}

TEST(RngTest, VideoIdBoundaryIsUnambiguous) {
  // Concatenation-style keys would collide here.
  EXPECT_NE(stable_hash(RngKey{1, "ab", Stream::plan, 0}), stable_hash(RngKey{1, "a", Stream::plan, 0}));
  EXPECT_NE(key_hex(RngKey{12, "3", Stream::plan, 0}), key_hex(RngKey{1, "23", Stream::plan, 0}));
}

TEST(RngTest, IdenticalKeyIdenticalStream) {
  const RngKey key{9, "x", Stream::speed, 3};
  Rng a(key), b(key);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
  EXPECT_EQ(key_hex(key).size(), 16u);
}

TEST(RngTest, BelowIsUniform) {
  constexpr int kDraws = 60000;
  std::array<int, 6> counts{};
  Rng rng(5);
  for (int i = 0; i < kDraws; ++i) {
    const auto v = rng.below(6);
    ASSERT_LT(v, 6u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_TRUE(testing::within_sigma(c, kDraws, 1.0 / 6.0, 4.0)) << c;
}

TEST(RngTest, UnitInHalfOpenRange) {
  Rng rng(6);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RngTest, SampleWithoutReplacementDistinct) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = rng.sample_without_replacement(10, 4);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 4u);
    for (auto v : s) EXPECT_LT(v, 10u);
  }
  EXPECT_THROW(rng.sample_without_replacement(3, 4), std::invalid_argument);
}

TEST(TaskKindTest, NamesRoundTripAndCardinality) {
  for (TaskKind k : kAllTaskKinds) {
    EXPECT_EQ(parse_task_kind(to_string(k)), k);
    const int expected = (k == TaskKind::consistency || k == TaskKind::adjust_or_not) ? 3 : 4;
    EXPECT_EQ(option_cardinality(k), expected) << to_string(k);
  }
  EXPECT_FALSE(parse_task_kind("sorting").has_value());
}

TEST(TaskKindTest, StreamOrdinalsMatchKinds) {
  for (TaskKind k : kAllTaskKinds) EXPECT_EQ(static_cast<int>(stream_for(k)), static_cast<int>(k));
}

}  // namespace
}  // namespace fragqa
