// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fragqa/core/rng.hpp"
#include "fragqa/sampler/motion.hpp"

namespace fragqa {

enum class Strategy { random, uniform, keyframe, motion_salient };

std::string_view to_string(Strategy s);
/// Accepts both "motion_salient" and "motion-salient".
std::optional<Strategy> parse_strategy(std::string_view name);

/// Chronologically ordered frame subset of one video.
struct Fragment {
  std::string video_id;
  std::vector<int> indices;  // strictly increasing
  Strategy strategy = Strategy::uniform;
  int set_id = 0;

  int size() const noexcept { return static_cast<int>(indices.size()); }
};

struct SampleOptions {
  // Motion-salient only: use bin midpoints instead of a random quantile per bin.
  bool midpoints = false;
};

/// floor(i * (T-1) / (m-1) + 0.5) for i in [0, m).
std::vector<int> uniform_indices(int frame_count, int m);

/// Selects m strictly increasing indices from a T-frame clip. Degenerate
/// profiles always produce the uniform selection. The returned fragment's
/// strategy is the one actually applied.
Fragment sample_fragment(const MotionProfile& profile, int frame_count, int m, Strategy strategy, Rng& rng,
                         SampleOptions options = {});
Fragment sample_fragment(const MotionProfile& profile, int frame_count, int m, Strategy strategy,
                         const RngKey& key, SampleOptions options = {});

struct SamplingPlan {
  int n_sets = 3;
  int m_min = 3;
  int m_max = 5;
  Strategy strategy = Strategy::motion_salient;
  std::uint64_t dataset_seed = 0;
  SampleOptions options;

  void validate() const;
};

struct PlanResult {
  std::vector<Fragment> fragments;
  std::vector<std::string> warnings;
  std::optional<std::string> skip_reason;
};

/// Draws plan.n_sets fragments, each with its size drawn uniformly from
/// [m_min, min(m_max, T)]. A fragment identical to an earlier one is redrawn
/// up to 32 times before the collision is accepted with a warning.
PlanResult build_plan(const std::string& video_id, const MotionProfile& profile, const SamplingPlan& plan);
PlanResult build_plan(const FrameSequence& seq, const SamplingPlan& plan,
                      std::optional<int> downscale = std::nullopt);

}  // namespace fragqa
