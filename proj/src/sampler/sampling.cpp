// SPDX-License-Identifier: Apache-2.0

#include "fragqa/sampler/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fragqa {

namespace {

constexpr int kMaxRedraws = 32;

__extension__ using u128 = unsigned __int128;

// Smallest transition k whose cumulative mass reaches num/den of the total.
int inverse_cdf_exact(const MotionProfile& p, std::uint64_t num, std::uint64_t den) {
  const auto total = static_cast<u128>(p.total());
  auto it = std::find_if(p.prefix.begin(), p.prefix.end(), [&](std::uint64_t s) {
    return static_cast<u128>(s) * den >= total * num;
  });
  return static_cast<int>(std::min<std::ptrdiff_t>(it - p.prefix.begin(),
                                                   static_cast<std::ptrdiff_t>(p.prefix.size()) - 1));
}

int inverse_cdf(const MotionProfile& p, long double q) {
  const long double target = q * static_cast<long double>(p.total());
  auto it = std::find_if(p.prefix.begin(), p.prefix.end(),
                         [&](std::uint64_t s) { return static_cast<long double>(s) >= target; });
  return static_cast<int>(std::min<std::ptrdiff_t>(it - p.prefix.begin(),
                                                   static_cast<std::ptrdiff_t>(p.prefix.size()) - 1));
}

// Turns a nondecreasing index list into a strictly increasing one inside
// [0, T-1], moving colliding entries to the nearest free slot after them
// (or before them at the end of the clip).
void spread_collisions(std::vector<int>& idx, int frame_count) {
  const int m = static_cast<int>(idx.size());
  for (int i = 1; i < m; ++i) idx[i] = std::max(idx[i], idx[i - 1] + 1);
  for (int i = m - 1; i >= 0; --i) {
    const int cap = i == m - 1 ? frame_count - 1 : idx[i + 1] - 1;
    idx[i] = std::min(idx[i], cap);
  }
}

std::vector<int> salient_indices(const MotionProfile& p, int frame_count, int m, Rng& rng, bool midpoints) {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int k;
    if (midpoints) {
      k = inverse_cdf_exact(p, static_cast<std::uint64_t>(2 * i + 1), static_cast<std::uint64_t>(2 * m));
    } else {
      // q in (i/m, (i+1)/m]
      const long double u = rng.unit();
      k = inverse_cdf(p, (static_cast<long double>(i) + 1.0L - u) / m);
    }
    idx.push_back(k + 1);
  }
  spread_collisions(idx, frame_count);
  return idx;
}

std::vector<int> keyframe_indices(const MotionProfile& p, int frame_count, int m) {
  std::vector<int> order(p.magnitudes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return p.magnitudes[static_cast<std::size_t>(a)] > p.magnitudes[static_cast<std::size_t>(b)];
  });
  const int take = std::min(m, frame_count - 1);
  std::vector<int> idx;
  for (int i = 0; i < take; ++i) idx.push_back(order[static_cast<std::size_t>(i)] + 1);
  if (take < m) idx.push_back(0);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::random: return "random";
    case Strategy::uniform: return "uniform";
    case Strategy::keyframe: return "keyframe";
    case Strategy::motion_salient: return "motion_salient";
  }
  return "unknown";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "random") return Strategy::random;
  if (name == "uniform") return Strategy::uniform;
  if (name == "keyframe") return Strategy::keyframe;
  if (name == "motion_salient" || name == "motion-salient") return Strategy::motion_salient;
  return std::nullopt;
}

std::vector<int> uniform_indices(int frame_count, int m) {
  if (m < 2 || m > frame_count) {
    throw std::invalid_argument("uniform_indices: need 2 <= m <= T, got m=" + std::to_string(m) +
                                " T=" + std::to_string(frame_count));
  }
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(m));
  const long long span = frame_count - 1;
  const long long steps = m - 1;
  for (long long i = 0; i < m; ++i) {
    // floor(i*span/steps + 1/2) == floor((2*i*span + steps) / (2*steps))
    idx.push_back(static_cast<int>((2 * i * span + steps) / (2 * steps)));
  }
  return idx;
}

Fragment sample_fragment(const MotionProfile& profile, int frame_count, int m, Strategy strategy, Rng& rng,
                         SampleOptions options) {
  if (m < 2 || m > frame_count) {
    throw std::invalid_argument("sample_fragment: need 2 <= m <= T, got m=" + std::to_string(m) +
                                " T=" + std::to_string(frame_count));
  }
  const bool needs_profile = strategy == Strategy::keyframe || strategy == Strategy::motion_salient;
  if (needs_profile && profile.frame_count() != frame_count) {
    throw std::invalid_argument("sample_fragment: profile covers " + std::to_string(profile.frame_count()) +
                                " frames, expected " + std::to_string(frame_count));
  }
  Fragment frag;
  frag.strategy = profile.degenerate ? Strategy::uniform : strategy;
  switch (frag.strategy) {
    case Strategy::random: {
      auto picks = rng.sample_without_replacement(static_cast<std::size_t>(frame_count), static_cast<std::size_t>(m));
      frag.indices.assign(picks.begin(), picks.end());
      std::sort(frag.indices.begin(), frag.indices.end());
      break;
    }
    case Strategy::uniform:
      frag.indices = uniform_indices(frame_count, m);
      break;
    case Strategy::keyframe:
      frag.indices = keyframe_indices(profile, frame_count, m);
      break;
    case Strategy::motion_salient:
      frag.indices = salient_indices(profile, frame_count, m, rng, options.midpoints);
      break;
  }
  return frag;
}

Fragment sample_fragment(const MotionProfile& profile, int frame_count, int m, Strategy strategy,
                         const RngKey& key, SampleOptions options) {
  Rng rng(key);
  return sample_fragment(profile, frame_count, m, strategy, rng, options);
}

void SamplingPlan::validate() const {
  if (n_sets < 1) throw std::invalid_argument("n_sets must be >= 1");
  if (m_min < 2 || m_max > 8 || m_min > m_max) {
    throw std::invalid_argument("frame range [" + std::to_string(m_min) + ", " + std::to_string(m_max) +
                                "] must lie within [2, 8]");
  }
}

PlanResult build_plan(const std::string& video_id, const MotionProfile& profile, const SamplingPlan& plan) {
  plan.validate();
  PlanResult result;
  const int frame_count = profile.frame_count();
  if (frame_count < plan.m_min) {
    result.skip_reason = "clip has " + std::to_string(frame_count) + " frames, fewer than the minimum fragment size " +
                         std::to_string(plan.m_min);
    return result;
  }
  if (profile.degenerate && plan.strategy != Strategy::uniform) {
    result.warnings.push_back("degenerate motion profile; falling back to uniform sampling");
  }
  const int m_hi = std::min(plan.m_max, frame_count);
  for (int set = 0; set < plan.n_sets; ++set) {
    Rng rng(RngKey{plan.dataset_seed, video_id, Stream::plan, static_cast<std::uint64_t>(set)});
    Fragment frag;
    bool distinct = false;
    for (int attempt = 0; attempt <= kMaxRedraws && !distinct; ++attempt) {
      const int m = static_cast<int>(rng.between(plan.m_min, m_hi));
      frag = sample_fragment(profile, frame_count, m, plan.strategy, rng, plan.options);
      distinct = std::none_of(result.fragments.begin(), result.fragments.end(),
                              [&](const Fragment& f) { return f.indices == frag.indices; });
    }
    if (!distinct) {
      result.warnings.push_back("set " + std::to_string(set) + " duplicates an earlier fragment after " +
                                std::to_string(kMaxRedraws) + " redraws");
    }
    frag.video_id = video_id;
    frag.set_id = set;
    result.fragments.push_back(std::move(frag));
  }
  return result;
}

PlanResult build_plan(const FrameSequence& seq, const SamplingPlan& plan, std::optional<int> downscale) {
  return build_plan(seq.video_id, motion_profile(seq, downscale), plan);
}

}  // namespace fragqa
