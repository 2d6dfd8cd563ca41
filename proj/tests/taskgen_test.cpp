// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "fragqa/core/errors.hpp"
#include "fragqa/core/permutation.hpp"
#include "fragqa/taskgen/generators.hpp"
#include "fragqa/taskgen/templates.hpp"
#include "test_util.hpp"

namespace fragqa {
namespace {

using testing::make_fragment;
using testing::spaced_fragment;

RngKey key_for(TaskKind kind, std::uint64_t i, std::uint64_t seed = 1) {
  return RngKey{seed, "v", stream_for(kind), i};
}

// Random strictly increasing fragment of size m drawn from a T-frame clip.
Fragment random_fragment(Rng& rng, int m, int T = 60) {
  auto picks = rng.sample_without_replacement(static_cast<std::size_t>(T), static_cast<std::size_t>(m));
  std::vector<int> idx(picks.begin(), picks.end());
  std::sort(idx.begin(), idx.end());
  return make_fragment(idx, "v", static_cast<int>(rng.below(3)));
}

PresenceMap random_presence(Rng& rng, int T = 60) {
  PresenceMap p{"v", "marker", std::vector<bool>(static_cast<std::size_t>(T))};
  for (std::size_t i = 0; i < p.present.size(); ++i) p.present[i] = rng.bernoulli(0.4);
  return p;
}

// One instance of `kind` from a random fragment, or nothing when the generator skips.
std::optional<TaskInstance> generate_any(TaskKind kind, std::uint64_t i, Rng& gen) {
  const int m = static_cast<int>(gen.between(3, 5));
  const Fragment f = random_fragment(gen, m);
  const RngKey key = key_for(kind, i);
  switch (kind) {
    case TaskKind::counting: return gen_counting(f, key);
    case TaskKind::consistency: return gen_consistency(f, RangeMode::any, 0.5, key);
    case TaskKind::localization_first:
    case TaskKind::localization_last:
    case TaskKind::localization_exist: {
      const auto variant = kind == TaskKind::localization_first  ? LocalizationVariant::first
                           : kind == TaskKind::localization_last ? LocalizationVariant::last
                                                                 : LocalizationVariant::exist;
      Generated g = gen_localization(f, random_presence(gen), "marker", variant, key);
      if (std::holds_alternative<Skip>(g)) return std::nullopt;
      return std::get<TaskInstance>(std::move(g));
    }
    case TaskKind::adjust_or_not: return gen_disorder(f, 0.5, key);
    case TaskKind::rearrangement: return gen_rearrangement(f, key);
    case TaskKind::speed: {
      const Speed s = static_cast<Speed>(gen.below(4));
      return gen_speed_qa("v", SpeedConfig{}.label(s), f.indices, key);
    }
  }
  return std::nullopt;
}

TEST(BuildOptionsTest, CountingPoolExample) {
  const OptionSet set = build_options("4", {"2", "3", "5", "6"}, 4, RngKey{});
  ASSERT_EQ(set.options.size(), 4u);
  EXPECT_EQ(set.key_text(), "4");
  int key_hits = 0;
  for (const Option& o : set.options) {
    if (o.text == "4") ++key_hits;
    else EXPECT_TRUE(o.text == "2" || o.text == "3" || o.text == "5" || o.text == "6");
  }
  EXPECT_EQ(key_hits, 1);
}

TEST(BuildOptionsTest, SingleOption) {
  const OptionSet set = build_options("4", {"2", "3"}, 1, RngKey{});
  ASSERT_EQ(set.options.size(), 1u);
  EXPECT_EQ(set.options[0].text, "4");
  EXPECT_EQ(set.key_label, "A");
}

TEST(BuildOptionsTest, PoolTooSmallIsGenerationError) {
  EXPECT_THROW(build_options("4", {"4", "5"}, 4, RngKey{}), GenerationError);
}

TEST(BuildOptionsTest, LabelsAreSequential) {
  const OptionSet set = build_options("x", {"a", "b", "c"}, 4, RngKey{});
  for (std::size_t i = 0; i < set.options.size(); ++i) EXPECT_EQ(set.options[i].label, std::string(1, char('A' + i)));
}

TEST(OrdinalTest, Suffixes) {
  EXPECT_EQ(ordinal(1), "1st");
  EXPECT_EQ(ordinal(2), "2nd");
  EXPECT_EQ(ordinal(3), "3rd");
  EXPECT_EQ(ordinal(4), "4th");
  EXPECT_EQ(ordinal(11), "11th");
  EXPECT_EQ(ordinal(12), "12th");
  EXPECT_EQ(ordinal(21), "21st");
}

TEST(CountingTest, KeyIsFragmentSize) {
  const TaskInstance four = gen_counting(spaced_fragment(4), key_for(TaskKind::counting, 0));
  EXPECT_EQ(four.option_set.key_text(), "4");
  EXPECT_EQ(four.option_set.options.size(), 4u);
  EXPECT_EQ(gen_counting(spaced_fragment(3), key_for(TaskKind::counting, 1)).option_set.key_text(), "3");
}

TEST(ConsistencyTest, SamePairIsYesDistinctIsNo) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const TaskInstance t = gen_consistency(spaced_fragment(5), RangeMode::any, 0.5, key_for(TaskKind::consistency, i));
    ASSERT_EQ(t.presented_indices.size(), 2u);
    const bool same = t.presented_indices[0] == t.presented_indices[1];
    EXPECT_EQ(t.option_set.key_text(), same ? "Yes" : "No");
    EXPECT_EQ(t.option_set.options.size(), 3u);
  }
}

TEST(ConsistencyTest, RangeModes) {
  for (std::uint64_t i = 0; i < 500; ++i) {
    const Fragment f = spaced_fragment(5);
    const TaskInstance adj = gen_consistency(f, RangeMode::adjacent, 0.0, key_for(TaskKind::consistency, i));
    const TaskInstance far = gen_consistency(f, RangeMode::nonadjacent, 0.0, key_for(TaskKind::consistency, i));
    auto pos = [&](int src) { return std::find(f.indices.begin(), f.indices.end(), src) - f.indices.begin(); };
    EXPECT_EQ(std::abs(pos(adj.presented_indices[1]) - pos(adj.presented_indices[0])), 1);
    EXPECT_GE(std::abs(pos(far.presented_indices[1]) - pos(far.presented_indices[0])), 2);
  }
}

TEST(ConsistencyTest, NonadjacentOnTwoFramesIsGenerationError) {
  EXPECT_THROW(gen_consistency(spaced_fragment(2), RangeMode::nonadjacent, 0.5, RngKey{}), GenerationError);
}

TEST(ConsistencyTest, SameRateFollowsProbability) {
  constexpr int kN = 10000;
  int same = 0;
  for (int i = 0; i < kN; ++i) {
    const auto t = gen_consistency(spaced_fragment(4), RangeMode::any, 0.3, key_for(TaskKind::consistency, i, 9));
    same += t.presented_indices[0] == t.presented_indices[1];
  }
  EXPECT_TRUE(testing::within_sigma(same, kN, 0.3)) << same;
}

TaskInstance localize(std::vector<bool> present, LocalizationVariant v) {
  const int m = static_cast<int>(present.size());
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  const PresenceMap map{"v", "dog", std::move(present)};
  Generated g = gen_localization(make_fragment(idx), map, "dog", v, RngKey{});
  return std::get<TaskInstance>(std::move(g));
}

TEST(LocalizationTest, Examples) {
  EXPECT_EQ(localize({false, true, true}, LocalizationVariant::first).option_set.key_text(), "2nd frame");
  EXPECT_EQ(localize({true, true, true}, LocalizationVariant::first).option_set.key_text(), "1st frame");
  EXPECT_EQ(localize({true, true, false, false}, LocalizationVariant::last).option_set.key_text(), "2nd frame");
  EXPECT_EQ(localize({true, false, true, false}, LocalizationVariant::exist).option_set.key_text(),
            "1st, 3rd frames");
}

TEST(LocalizationTest, ThreeFramePoolIsCompleted) {
  const TaskInstance t = localize({false, true, true}, LocalizationVariant::first);
  ASSERT_EQ(t.option_set.options.size(), 4u);
  bool has_absent = false;
  for (const Option& o : t.option_set.options) has_absent |= o.text == kDoesNotAppear;
  EXPECT_TRUE(has_absent);
  EXPECT_NE(t.option_set.key_text(), kDoesNotAppear);
}

TEST(LocalizationTest, AbsentEverywhereIsSkipped) {
  const PresenceMap map{"v", "dog", {false, false, false, false}};
  const Generated g = gen_localization(make_fragment({0, 1, 2, 3}), map, "dog", LocalizationVariant::first, RngKey{});
  ASSERT_TRUE(std::holds_alternative<Skip>(g));
  EXPECT_FALSE(std::get<Skip>(g).reason.empty());
}

TEST(LocalizationTest, KeyMatchesPresenceOracle) {
  Rng gen(31);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Fragment f = random_fragment(gen, static_cast<int>(gen.between(3, 5)));
    const PresenceMap map = random_presence(gen);
    std::vector<int> hits;
    for (std::size_t p = 0; p < f.indices.size(); ++p) {
      if (map.present[static_cast<std::size_t>(f.indices[p])]) hits.push_back(static_cast<int>(p) + 1);
    }
    for (auto v : {LocalizationVariant::first, LocalizationVariant::last, LocalizationVariant::exist}) {
      const Generated g = gen_localization(f, map, "marker", v, key_for(kind_of(v), i));
      ASSERT_EQ(std::holds_alternative<Skip>(g), hits.empty());
      if (hits.empty()) continue;
      const std::string key = std::get<TaskInstance>(g).option_set.key_text();
      if (v == LocalizationVariant::first) {
        EXPECT_EQ(key, ordinal(hits.front()) + " frame");
      }
      if (v == LocalizationVariant::last) {
        EXPECT_EQ(key, ordinal(hits.back()) + " frame");
      }
      if (v == LocalizationVariant::exist) {
        std::string expected;
        for (std::size_t h = 0; h < hits.size(); ++h) expected += (h ? ", " : "") + ordinal(hits[h]);
        EXPECT_EQ(key, expected + (hits.size() == 1 ? " frame" : " frames"));
      }
    }
  }
}

TEST(DisorderTest, IdentityIsNoShuffledIsYes) {
  const TaskInstance unshuffled = gen_disorder(spaced_fragment(4), 0.0, RngKey{});
  EXPECT_EQ(unshuffled.option_set.key_text(), "No");
  EXPECT_EQ(unshuffled.presented_indices, spaced_fragment(4).indices);
  const TaskInstance shuffled = gen_disorder(spaced_fragment(4), 1.0, RngKey{});
  EXPECT_EQ(shuffled.option_set.key_text(), "Yes");
  EXPECT_FALSE(std::is_sorted(shuffled.presented_indices.begin(), shuffled.presented_indices.end()));
}

TEST(DisorderTest, YesRateAtHalf) {
  constexpr int kN = 10000;
  int yes = 0;
  for (int i = 0; i < kN; ++i) {
    yes += gen_disorder(spaced_fragment(4), 0.5, key_for(TaskKind::adjust_or_not, i, 4)).option_set.key_text() == "Yes";
  }
  EXPECT_TRUE(testing::within_sigma(yes, kN, 0.5)) << yes;
}

TEST(RearrangementTest, WorkedExample) {
  // Presenting [s2, s0, s1] and reading positions 2, 3, 1 restores s0, s1, s2.
  const Permutation p({2, 0, 1});
  const Permutation key = invert_permutation(p);
  EXPECT_EQ(key.to_display(), "2, 3, 1");
  const std::vector<int> presented = apply_permutation(p, std::vector<int>{10, 20, 30});
  EXPECT_EQ(apply_permutation(key, presented), (std::vector<int>{10, 20, 30}));
}

TEST(RearrangementTest, KeyRestoresOrderOverThousandInstances) {
  Rng gen(77);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Fragment f = random_fragment(gen, static_cast<int>(gen.between(3, 5)));
    const TaskInstance t = gen_rearrangement(f, key_for(TaskKind::rearrangement, i));
    const auto restored = apply_permutation(Permutation::from_display(t.option_set.key_text()), t.presented_indices);
    EXPECT_EQ(restored, f.indices);
    EXPECT_NE(t.presented_indices, f.indices);
    std::set<std::string> texts;
    for (const Option& o : t.option_set.options) {
      texts.insert(o.text);
      EXPECT_NO_THROW(Permutation::from_display(o.text));
    }
    EXPECT_EQ(texts.size(), 4u);
  }
}

TEST(RearrangementTest, TwoFramesRejected) {
  EXPECT_THROW(gen_rearrangement(spaced_fragment(2), RngKey{}), std::invalid_argument);
}

TEST(SpeedQaTest, KeysAndFixedOptions) {
  const SpeedConfig cfg;
  EXPECT_EQ(gen_speed_qa("v", cfg.label(Speed::fast), {0, 2}, RngKey{}).option_set.key_text(), "fast");
  EXPECT_EQ(gen_speed_qa("v", cfg.label(Speed::no_speed), {0, 0}, RngKey{}).option_set.key_text(), "no speed");
  const TaskInstance normal = gen_speed_qa("v", cfg.label(Speed::normal), {0, 1}, RngKey{});
  EXPECT_EQ(normal.option_set.key_text(), "normal");
  std::set<std::string> texts;
  for (const Option& o : normal.option_set.options) texts.insert(o.text);
  EXPECT_EQ(texts, (std::set<std::string>{"fast", "slow", "normal", "no speed"}));
}

TEST(TaskProperties, OptionSetsTemplatesAndKeysHoldForAllKinds) {
  const TemplateBank& bank = TemplateBank::defaults();
  for (TaskKind kind : kAllTaskKinds) {
    Rng gen(1000 + static_cast<int>(kind));
    for (std::uint64_t i = 0; i < 500; ++i) {
      const auto t = generate_any(kind, i, gen);
      if (!t) continue;
      const auto& opts = t->option_set.options;
      ASSERT_EQ(static_cast<int>(opts.size()), option_cardinality(kind)) << to_string(kind);
      std::set<std::string> texts;
      for (const Option& o : opts) texts.insert(o.text);
      EXPECT_EQ(texts.size(), opts.size());
      EXPECT_EQ(std::count_if(opts.begin(), opts.end(),
                              [&](const Option& o) { return o.label == t->option_set.key_label; }),
                1);
      EXPECT_NE(t->option_set.key_text(), kNotSure);
      EXPECT_TRUE(bank.contains(kind, t->question, t->meta.target.value_or(""))) << t->question;
      if (kind == TaskKind::adjust_or_not) {
        const bool sorted = std::is_sorted(t->presented_indices.begin(), t->presented_indices.end());
        EXPECT_EQ(t->option_set.key_text() == "Yes", !sorted);
      }
    }
  }
}

TEST(TaskProperties, KeyPlacementIsUniformPerKind) {
  constexpr int kN = 10000;
  for (TaskKind kind : kAllTaskKinds) {
    Rng gen(5000 + static_cast<int>(kind));
    std::map<std::string, int> counts;
    int total = 0;
    for (std::uint64_t i = 0; total < kN; ++i) {
      const auto t = generate_any(kind, i, gen);
      if (!t) continue;
      ++counts[t->option_set.key_label];
      ++total;
    }
    const int k = option_cardinality(kind);
    ASSERT_EQ(static_cast<int>(counts.size()), k) << to_string(kind);
    for (const auto& [label, n] : counts) {
      EXPECT_TRUE(testing::within_sigma(n, kN, 1.0 / k)) << to_string(kind) << " " << label << " " << n;
    }
  }
}

TEST(TaskProperties, SameKeySameInstance) {
  Rng a(3), b(3);
  for (TaskKind kind : kAllTaskKinds) {
    for (std::uint64_t i = 0; i < 20; ++i) EXPECT_EQ(generate_any(kind, i, a), generate_any(kind, i, b));
  }
}

TEST(TemplateBankTest, DefaultsCoverEveryKind) {
  for (TaskKind kind : kAllTaskKinds) EXPECT_FALSE(TemplateBank::defaults().templates(kind).empty());
  EXPECT_TRUE(TemplateBank::defaults().contains(TaskKind::counting,
                                                "Could you please tell me how many frames I have inputted?"));
}

TEST(TemplateBankTest, PluginMergeAndTargetPlaceholder) {
  TemplateBank bank = TemplateBank::defaults();
  bank.merge(TemplateBank::parse("# extra\n[localization_first]\nWhen does the {target} first show up?\n"));
  EXPECT_EQ(bank.templates(TaskKind::localization_first).size(), 2u);
  EXPECT_TRUE(bank.contains(TaskKind::localization_first, "When does the dog first show up?", "dog"));
  EXPECT_FALSE(bank.contains(TaskKind::localization_first, "When does the cat first show up?", "dog"));
  EXPECT_EQ(TemplateBank::parse(bank.to_text()).templates(TaskKind::localization_first),
            bank.templates(TaskKind::localization_first));
}

TEST(TemplateBankTest, UnknownSectionRejected) {
  EXPECT_THROW(TemplateBank::parse("[sorting]\nSort these.\n"), std::invalid_argument);
}

}  // namespace
}  // namespace fragqa
