// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fragqa/augment/speed.hpp"
#include "fragqa/core/rng.hpp"
#include "fragqa/ingest/frames.hpp"
#include "fragqa/sampler/sampling.hpp"
#include "fragqa/taskgen/task.hpp"
#include "fragqa/taskgen/templates.hpp"

namespace fragqa {

inline constexpr std::string_view kYes = "Yes";
inline constexpr std::string_view kNo = "No";
inline constexpr std::string_view kNotSure = "Not sure";
inline constexpr std::string_view kDoesNotAppear = "It does not appear";

/// An instance that could not be generated, with the reason to log.
struct Skip {
  std::string reason;
};

using Generated = std::variant<TaskInstance, Skip>;

/// k options: the key plus k-1 distinct distractors drawn without replacement
/// from `pool` (entries equal to the key are ignored). The key lands on a
/// uniformly random label. Throws GenerationError if the pool is too small.
OptionSet build_options(const std::string& key_text, const std::vector<std::string>& pool, int k, Rng& rng);
OptionSet build_options(const std::string& key_text, const std::vector<std::string>& pool, int k,
                        const RngKey& key);

/// "1st", "2nd", ... for a 1-based position.
std::string ordinal(int position);

TaskInstance gen_counting(const Fragment& fragment, const RngKey& key,
                          const TemplateBank& bank = TemplateBank::defaults());

/// With probability p_same both slots show the same frame (key "Yes");
/// otherwise two distinct positions allowed by `range_mode` (key "No").
TaskInstance gen_consistency(const Fragment& fragment, RangeMode range_mode, double p_same, const RngKey& key,
                             const TemplateBank& bank = TemplateBank::defaults());

enum class LocalizationVariant { first, last, exist };

TaskKind kind_of(LocalizationVariant v);

/// `presence` is indexed by source frame. Skips when the target is absent
/// from every frame of the fragment.
Generated gen_localization(const Fragment& fragment, const PresenceMap& presence, const std::string& target,
                           LocalizationVariant variant, const RngKey& key,
                           const TemplateBank& bank = TemplateBank::defaults());

/// With probability p_shuffle presents a non-identity shuffle (key "Yes"),
/// otherwise the chronological order (key "No").
TaskInstance gen_disorder(const Fragment& fragment, double p_shuffle, const RngKey& key,
                          const TemplateBank& bank = TemplateBank::defaults());

/// Presents a non-identity shuffle p; the key is inverse(p) rendered as a
/// 1-based list, so reading the presented frames in key order restores
/// chronology.
TaskInstance gen_rearrangement(const Fragment& fragment, const RngKey& key,
                               const TemplateBank& bank = TemplateBank::defaults());

TaskInstance gen_speed_qa(const std::string& video_id, const SpeedLabel& label, std::vector<int> presented_indices,
                          const RngKey& key, const TemplateBank& bank = TemplateBank::defaults());

}  // namespace fragqa
