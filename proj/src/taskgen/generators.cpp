// SPDX-License-Identifier: Apache-2.0

#include "fragqa/taskgen/generators.hpp"

#include <algorithm>
#include <stdexcept>

#include "fragqa/core/errors.hpp"
#include "fragqa/core/permutation.hpp"

namespace fragqa {

namespace {

constexpr int kMaxLabels = 4;

std::string pick_question(TaskKind kind, const TemplateBank& bank, Rng& rng, std::string_view target = {}) {
  const auto& list = bank.templates(kind);
  if (list.empty()) throw GenerationError("no question template for " + std::string(to_string(kind)));
  return render_template(list[static_cast<std::size_t>(rng.below(list.size()))], target);
}

TaskInstance base_instance(TaskKind kind, const Fragment& fragment, const RngKey& key) {
  TaskInstance inst;
  inst.id = key_hex(key);
  inst.kind = kind;
  inst.video_id = fragment.video_id;
  inst.meta.m = fragment.size();
  inst.meta.set_id = fragment.set_id;
  inst.meta.fragment_id = fragment.video_id + "/set" + std::to_string(fragment.set_id);
  inst.meta.strategy = fragment.strategy;
  return inst;
}

std::vector<std::string> yes_no_pool() { return {std::string(kYes), std::string(kNo), std::string(kNotSure)}; }

std::string frames_phrase(const std::vector<int>& positions) {
  std::string out;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i) out += ", ";
    out += ordinal(positions[i]);
  }
  return out + (positions.size() == 1 ? " frame" : " frames");
}

}  // namespace

OptionSet build_options(const std::string& key_text, const std::vector<std::string>& pool, int k, Rng& rng) {
  if (k < 1 || k > kMaxLabels) throw std::invalid_argument("option count must be in [1, 4]");
  std::vector<std::string> distractors;
  for (const auto& t : pool) {
    if (t != key_text && std::find(distractors.begin(), distractors.end(), t) == distractors.end()) {
      distractors.push_back(t);
    }
  }
  const auto need = static_cast<std::size_t>(k - 1);
  if (distractors.size() < need) {
    throw GenerationError("need " + std::to_string(need) + " distractors for '" + key_text + "', pool has " +
                          std::to_string(distractors.size()));
  }
  std::vector<std::string> texts;
  for (auto i : rng.sample_without_replacement(distractors.size(), need)) texts.push_back(distractors[i]);
  const auto key_pos = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k)));
  texts.insert(texts.begin() + static_cast<std::ptrdiff_t>(key_pos), key_text);

  OptionSet set;
  for (std::size_t i = 0; i < texts.size(); ++i) set.options.push_back({option_label(i), texts[i]});
  set.key_label = option_label(key_pos);
  return set;
}

OptionSet build_options(const std::string& key_text, const std::vector<std::string>& pool, int k,
                        const RngKey& key) {
  Rng rng(key);
  return build_options(key_text, pool, k, rng);
}

std::string ordinal(int position) {
  const int tens = position % 100;
  const char* suffix = "th";
  if (tens < 11 || tens > 13) {
    switch (position % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(position) + suffix;
}

TaskInstance gen_counting(const Fragment& fragment, const RngKey& key, const TemplateBank& bank) {
  Rng rng(key);
  TaskInstance inst = base_instance(TaskKind::counting, fragment, key);
  inst.presented_indices = fragment.indices;
  inst.question = pick_question(inst.kind, bank, rng);
  std::vector<std::string> pool;
  for (int n = 2; n <= 6; ++n) pool.push_back(std::to_string(n));
  inst.option_set = build_options(std::to_string(fragment.size()), pool, option_cardinality(inst.kind), rng);
  return inst;
}

TaskInstance gen_consistency(const Fragment& fragment, RangeMode range_mode, double p_same, const RngKey& key,
                             const TemplateBank& bank) {
  const int m = fragment.size();
  if (m < 2) throw std::invalid_argument("consistency needs a fragment of at least 2 frames");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const bool ok = range_mode == RangeMode::any || (range_mode == RangeMode::adjacent && j - i == 1) ||
                      (range_mode == RangeMode::nonadjacent && j - i >= 2);
      if (ok) pairs.emplace_back(i, j);
    }
  }
  if (pairs.empty()) {
    throw GenerationError("range mode " + std::string(to_string(range_mode)) + " cannot be satisfied by a " +
                          std::to_string(m) + "-frame fragment");
  }
  Rng rng(key);
  TaskInstance inst = base_instance(TaskKind::consistency, fragment, key);
  inst.meta.range_mode = range_mode;
  inst.question = pick_question(inst.kind, bank, rng);
  std::string key_text;
  if (rng.bernoulli(p_same)) {
    const int pos = fragment.indices[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(m)))];
    inst.presented_indices = {pos, pos};
    key_text = kYes;
  } else {
    const auto [i, j] = pairs[static_cast<std::size_t>(rng.below(pairs.size()))];
    inst.presented_indices = {fragment.indices[static_cast<std::size_t>(i)],
                              fragment.indices[static_cast<std::size_t>(j)]};
    key_text = kNo;
  }
  inst.option_set = build_options(key_text, yes_no_pool(), option_cardinality(inst.kind), rng);
  return inst;
}

TaskKind kind_of(LocalizationVariant v) {
  switch (v) {
    case LocalizationVariant::first: return TaskKind::localization_first;
    case LocalizationVariant::last: return TaskKind::localization_last;
    case LocalizationVariant::exist: return TaskKind::localization_exist;
  }
  return TaskKind::localization_first;
}

Generated gen_localization(const Fragment& fragment, const PresenceMap& presence, const std::string& target,
                           LocalizationVariant variant, const RngKey& key, const TemplateBank& bank) {
  const int m = fragment.size();
  std::vector<int> present_positions;  // 1-based positions within the fragment
  for (int i = 0; i < m; ++i) {
    const int src = fragment.indices[static_cast<std::size_t>(i)];
    if (src < 0 || src >= static_cast<int>(presence.present.size())) {
      throw std::invalid_argument("fragment index " + std::to_string(src) + " outside the presence map");
    }
    if (presence.present[static_cast<std::size_t>(src)]) present_positions.push_back(i + 1);
  }
  if (present_positions.empty()) {
    return Skip{"target '" + target + "' absent from every frame of " + fragment.video_id + " set " +
                std::to_string(fragment.set_id)};
  }

  Rng rng(key);
  TaskInstance inst = base_instance(kind_of(variant), fragment, key);
  inst.presented_indices = fragment.indices;
  inst.meta.target = target;
  inst.question = pick_question(inst.kind, bank, rng, target);

  std::string key_text;
  std::vector<std::string> pool;
  if (variant == LocalizationVariant::exist) {
    key_text = frames_phrase(present_positions);
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<int> subset;
      for (int i = 0; i < m; ++i) {
        if (mask & (1u << i)) subset.push_back(i + 1);
      }
      pool.push_back(frames_phrase(subset));
    }
  } else {
    const int pos = variant == LocalizationVariant::first ? present_positions.front() : present_positions.back();
    key_text = frames_phrase({pos});
    for (int i = 1; i <= m; ++i) {
      if (i != pos) pool.push_back(frames_phrase({i}));
    }
    if (static_cast<int>(pool.size()) < option_cardinality(inst.kind) - 1) pool.emplace_back(kDoesNotAppear);
  }
  inst.option_set = build_options(key_text, pool, option_cardinality(inst.kind), rng);
  return inst;
}

TaskInstance gen_disorder(const Fragment& fragment, double p_shuffle, const RngKey& key, const TemplateBank& bank) {
  const int m = fragment.size();
  if (m < 3) throw std::invalid_argument("disorder detection needs a fragment of at least 3 frames");
  Rng rng(key);
  TaskInstance inst = base_instance(TaskKind::adjust_or_not, fragment, key);
  inst.question = pick_question(inst.kind, bank, rng);
  const Permutation p = rng.bernoulli(p_shuffle) ? random_permutation(m, true, rng) : Permutation::identity(m);
  inst.presented_indices = apply_permutation(p, fragment.indices);
  inst.meta.permutation = std::vector<int>(p.mapping().begin(), p.mapping().end());
  const std::string key_text(p.is_identity() ? kNo : kYes);
  inst.option_set = build_options(key_text, yes_no_pool(), option_cardinality(inst.kind), rng);
  return inst;
}

TaskInstance gen_rearrangement(const Fragment& fragment, const RngKey& key, const TemplateBank& bank) {
  const int m = fragment.size();
  if (m < 3 || m > Permutation::kMaxSize) {
    throw std::invalid_argument("rearrangement needs a fragment of 3 to 8 frames");
  }
  Rng rng(key);
  TaskInstance inst = base_instance(TaskKind::rearrangement, fragment, key);
  inst.question = pick_question(inst.kind, bank, rng);
  const Permutation p = random_permutation(m, true, rng);
  inst.presented_indices = apply_permutation(p, fragment.indices);
  inst.meta.permutation = std::vector<int>(p.mapping().begin(), p.mapping().end());

  const std::string key_text = invert_permutation(p).to_display();
  const int k = option_cardinality(inst.kind);
  std::vector<std::string> pool;
  while (static_cast<int>(pool.size()) < k - 1) {
    std::string text = random_permutation(m, false, rng).to_display();
    if (text != key_text && std::find(pool.begin(), pool.end(), text) == pool.end()) pool.push_back(std::move(text));
  }
  inst.option_set = build_options(key_text, pool, k, rng);
  return inst;
}

TaskInstance gen_speed_qa(const std::string& video_id, const SpeedLabel& label, std::vector<int> presented_indices,
                          const RngKey& key, const TemplateBank& bank) {
  Rng rng(key);
  TaskInstance inst;
  inst.id = key_hex(key);
  inst.kind = TaskKind::speed;
  inst.video_id = video_id;
  inst.meta.m = static_cast<int>(presented_indices.size());
  inst.meta.speed_label = label.value;
  inst.presented_indices = std::move(presented_indices);
  inst.question = pick_question(inst.kind, bank, rng);
  std::vector<std::string> pool;
  for (Speed s : {Speed::fast, Speed::slow, Speed::normal, Speed::no_speed}) pool.emplace_back(display_name(s));
  inst.option_set = build_options(std::string(display_name(label.value)), pool, option_cardinality(inst.kind), rng);
  return inst;
}

}  // namespace fragqa
