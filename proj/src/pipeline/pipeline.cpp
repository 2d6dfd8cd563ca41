// SPDX-License-Identifier: Apache-2.0

#include "fragqa/pipeline/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <sstream>
#include <thread>

#include "fragqa/core/errors.hpp"
#include "fragqa/dataset/dataset.hpp"
#include "fragqa/ingest/image_io.hpp"
#include "fragqa/ingest/manifest.hpp"
#include "fragqa/taskgen/generators.hpp"

namespace fragqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct VideoOutcome {
  std::vector<DatasetRecord> records;
  std::vector<LogEntry> skips;
  std::vector<LogEntry> warnings;
  bool failed = false;
};

class VideoJob {
 public:
  VideoJob(const PipelineConfig& config, const TemplateBank& bank, const ManifestEntry& entry, fs::path root)
      : config_(config), bank_(bank), entry_(entry), root_(std::move(root)) {}

  VideoOutcome run() {
    try {
      process();
    } catch (const Error& e) {
      fail(e.what());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    } catch (const fs::filesystem_error& e) {
      fail(e.what());
    }
    return std::move(out_);
  }

 private:
  void skip(std::string reason) { out_.skips.push_back({entry_.video_id, std::move(reason)}); }
  // A failed video contributes no records, only its log entries.
  void fail(std::string reason) {
    skip(std::move(reason));
    out_.records.clear();
    out_.failed = true;
  }
  void warn(std::string reason) { out_.warnings.push_back({entry_.video_id, std::move(reason)}); }

  bool enabled(TaskFamily f) const { return config_.tasks.count(f) > 0; }

  RngKey key(TaskKind kind, std::uint64_t index) const {
    return RngKey{config_.dataset_seed, entry_.video_id, stream_for(kind), index};
  }

  std::string ref(const std::string& path) const {
    return fs::weakly_canonical(fs::absolute(path)).lexically_relative(root_).generic_string();
  }

  void add(TaskInstance inst) {
    DatasetRecord rec;
    rec.frame_refs.reserve(inst.presented_indices.size());
    for (int i : inst.presented_indices) rec.frame_refs.push_back(frame_refs_[static_cast<std::size_t>(i)]);
    rec.instance = std::move(inst);
    rec.dataset_seed = config_.dataset_seed;
    out_.records.push_back(std::move(rec));
  }

  bool frames_identical(const Fragment& frag) const {
    const GrayImage& first = seq_.frames[static_cast<std::size_t>(frag.indices.front())].image;
    return std::all_of(frag.indices.begin(), frag.indices.end(),
                       [&](int i) { return seq_.frames[static_cast<std::size_t>(i)].image == first; });
  }

  void process() {
    if (entry_.video && config_.decoder && !fs::exists(entry_.frame_directory)) {
      run_decoder(*config_.decoder, *entry_.video, entry_.frame_directory);
    }
    seq_ = load_sequence(entry_);
    for (const Frame& f : seq_.frames) frame_refs_.push_back(ref(f.source_path));

    std::optional<PresenceMap> presence;
    if (enabled(TaskFamily::localization)) {
      if (entry_.presence_sidecar) {
        try {
          presence = load_presence(*entry_.presence_sidecar, seq_);
          if (presence->all_absent()) {
            warn("presence sidecar marks the target absent everywhere; no localization questions");
            presence.reset();
          }
        } catch (const AnnotationError& e) {
          warn(e.what());
        }
      }
    }

    const MotionProfile profile = motion_profile(seq_, config_.downscale);
    SamplingPlan plan;
    plan.n_sets = config_.n_sets;
    plan.m_min = config_.m_min;
    plan.m_max = config_.m_max;
    plan.strategy = config_.strategy;
    plan.dataset_seed = config_.dataset_seed;
    plan.options.midpoints = config_.salient_midpoints;
    PlanResult planned = build_plan(entry_.video_id, profile, plan);
    for (auto& w : planned.warnings) warn(std::move(w));
    if (planned.skip_reason) {
      fail(*planned.skip_reason);
      return;
    }

    for (const Fragment& frag : planned.fragments) generate_fragment_tasks(frag, presence);
    if (enabled(TaskFamily::speed)) generate_speed_tasks();
  }

  template <typename Fn>
  void attempt(TaskKind kind, const Fragment& frag, Fn&& fn) {
    try {
      fn();
    } catch (const GenerationError& e) {
      skip(std::string(to_string(kind)) + " set " + std::to_string(frag.set_id) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      skip(std::string(to_string(kind)) + " set " + std::to_string(frag.set_id) + ": " + e.what());
    }
  }

  void generate_fragment_tasks(const Fragment& frag, const std::optional<PresenceMap>& presence) {
    const auto set = static_cast<std::uint64_t>(frag.set_id);
    const bool static_fragment = frames_identical(frag);

    if (enabled(TaskFamily::counting)) {
      attempt(TaskKind::counting, frag, [&] { add(gen_counting(frag, key(TaskKind::counting, set), bank_)); });
    }
    if (enabled(TaskFamily::consistency)) {
      attempt(TaskKind::consistency, frag, [&] {
        TaskInstance inst =
            gen_consistency(frag, config_.range_mode, config_.p_same, key(TaskKind::consistency, set), bank_);
        const auto& p = inst.presented_indices;
        if (p[0] != p[1] && seq_.frames[static_cast<std::size_t>(p[0])].image ==
                                seq_.frames[static_cast<std::size_t>(p[1])].image) {
          skip("consistency set " + std::to_string(frag.set_id) + ": distinct frames are pixel-identical");
          return;
        }
        add(std::move(inst));
      });
    }
    if (presence) {
      const auto variant = static_cast<LocalizationVariant>(frag.set_id % 3);
      const TaskKind kind = kind_of(variant);
      attempt(kind, frag, [&] {
        Generated g = gen_localization(frag, *presence, presence->target, variant, key(kind, set), bank_);
        if (auto* s = std::get_if<Skip>(&g)) {
          skip(std::string(to_string(kind)) + ": " + s->reason);
        } else {
          add(std::get<TaskInstance>(std::move(g)));
        }
      });
    }
    for (TaskKind kind : {TaskKind::adjust_or_not, TaskKind::rearrangement}) {
      const TaskFamily family =
          kind == TaskKind::adjust_or_not ? TaskFamily::adjust_or_not : TaskFamily::rearrangement;
      if (!enabled(family)) continue;
      if (static_fragment) {
        skip(std::string(to_string(kind)) + " set " + std::to_string(frag.set_id) +
             ": all fragment frames are identical, order is unrecoverable");
        continue;
      }
      attempt(kind, frag, [&] {
        add(kind == TaskKind::adjust_or_not ? gen_disorder(frag, config_.p_shuffle, key(kind, set), bank_)
                                            : gen_rearrangement(frag, key(kind, set), bank_));
      });
    }
  }

  void generate_speed_tasks() {
    std::vector<Speed> variants = {Speed::normal};
    for (Speed s : config_.speed_variants) {
      if (std::find(variants.begin(), variants.end(), s) == variants.end()) variants.push_back(s);
    }
    for (Speed s : variants) {
      const SpeedLabel label = config_.speed.label(s);
      SpeedVariant variant;
      try {
        variant = speed_variant(seq_, label, config_.speed.blend);
      } catch (const std::invalid_argument& e) {
        skip("speed " + std::string(to_string(s)) + ": " + e.what());
        continue;
      }
      TaskInstance inst = gen_speed_qa(entry_.video_id, label, variant.source_indices,
                                       key(TaskKind::speed, static_cast<std::uint64_t>(s)), bank_);
      DatasetRecord rec;
      for (std::size_t i = 0; i < variant.sequence.frames.size(); ++i) {
        const Frame& f = variant.sequence.frames[i];
        if (!f.source_path.empty()) {
          rec.frame_refs.push_back(frame_refs_[static_cast<std::size_t>(variant.source_indices[i])]);
          continue;
        }
        const fs::path dir = config_.out_dir / "frames" / entry_.video_id / std::string(to_string(s));
        fs::create_directories(dir);
        char name[32];
        std::snprintf(name, sizeof name, "%04d.png", f.index);
        write_png(dir / name, f.image);
        rec.frame_refs.push_back(ref((dir / name).string()));
      }
      rec.instance = std::move(inst);
      rec.dataset_seed = config_.dataset_seed;
      out_.records.push_back(std::move(rec));
    }
  }

  const PipelineConfig& config_;
  const TemplateBank& bank_;
  const ManifestEntry& entry_;
  fs::path root_;
  FrameSequence seq_;
  std::vector<std::string> frame_refs_;
  VideoOutcome out_;
};

}  // namespace

std::string_view to_string(TaskFamily f) {
  switch (f) {
    case TaskFamily::counting: return "counting";
    case TaskFamily::consistency: return "consistency";
    case TaskFamily::localization: return "localization";
    case TaskFamily::adjust_or_not: return "adjust_or_not";
    case TaskFamily::rearrangement: return "rearrangement";
    case TaskFamily::speed: return "speed";
  }
  return "unknown";
}

std::set<TaskFamily> parse_task_families(std::string_view list) {
  static constexpr TaskFamily kAll[] = {TaskFamily::counting,      TaskFamily::consistency,
                                        TaskFamily::localization,  TaskFamily::adjust_or_not,
                                        TaskFamily::rearrangement, TaskFamily::speed};
  std::set<TaskFamily> out;
  std::stringstream in{std::string(list)};
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      out.insert(std::begin(kAll), std::end(kAll));
      continue;
    }
    if (item == "disorder") item = "adjust_or_not";
    bool found = false;
    for (TaskFamily f : kAll) {
      if (to_string(f) == item) {
        out.insert(f);
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("unknown task '" + item + "'");
  }
  if (out.empty()) throw std::invalid_argument("no tasks selected");
  return out;
}

void PipelineConfig::validate() const {
  SamplingPlan{n_sets, m_min, m_max, strategy, dataset_seed, {}}.validate();
  if (p_same < 0 || p_same > 1) throw std::invalid_argument("--same-prob must be in [0, 1]");
  if (p_shuffle < 0 || p_shuffle > 1) throw std::invalid_argument("--shuffle-prob must be in [0, 1]");
  if (speed.fast_factor < 2 || speed.slow_factor < 2) throw std::invalid_argument("speed factors must be >= 2");
  if (downscale && *downscale < 1) throw std::invalid_argument("--downscale must be >= 1");
  if (workers < 1) throw std::invalid_argument("--workers must be >= 1");
  if (tasks.empty()) throw std::invalid_argument("no tasks selected");
}

json PipelineConfig::to_json() const {
  json task_list = json::array();
  for (TaskFamily f : tasks) task_list.push_back(std::string(to_string(f)));
  json variants = json::array();
  for (Speed s : speed_variants) variants.push_back(std::string(to_string(s)));
  json j = {{"seed", dataset_seed},
            {"sets", n_sets},
            {"frames_min", m_min},
            {"frames_max", m_max},
            {"strategy", std::string(to_string(strategy))},
            {"salient_midpoints", salient_midpoints},
            {"range_mode", std::string(to_string(range_mode))},
            {"same_prob", p_same},
            {"shuffle_prob", p_shuffle},
            {"speed_factors", {speed.fast_factor, speed.slow_factor}},
            {"speed_blend", speed.blend},
            {"speed_variants", std::move(variants)},
            {"tasks", std::move(task_list)},
            {"strip_answers", strip_answers},
            {"downscale", downscale ? json(*downscale) : json(nullptr)}};
  if (templates) j["templates"] = templates->filename().string();
  return j;
}

std::string GenerateSummary::line() const {
  std::string out = "generated " + std::to_string(records) + " records from " + std::to_string(videos - videos_failed) +
                    "/" + std::to_string(videos) + " videos (";
  bool first = true;
  for (const auto& [kind, n] : counts) {
    if (n == 0) continue;
    out += (first ? "" : ", ") + std::string(to_string(kind)) + "=" + std::to_string(n);
    first = false;
  }
  return out + "); " + std::to_string(skips.size()) + " skips, " + std::to_string(warnings.size()) + " warnings";
}

GenerateSummary generate_dataset(const PipelineConfig& config) {
  config.validate();
  const VideoManifest manifest = load_manifest(config.manifest);
  TemplateBank bank = TemplateBank::defaults();
  if (config.templates) bank.merge(TemplateBank::load(*config.templates));

  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw EmitError("cannot create " + config.out_dir.string() + ": " + ec.message());
  const fs::path root = fs::weakly_canonical(fs::absolute(config.out_dir));

  std::vector<VideoOutcome> outcomes(manifest.entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.entries.size(); i = next++) {
      outcomes[i] = VideoJob(config, bank, manifest.entries[i], root).run();
    }
  };
  const int n_threads = std::max(1, std::min<int>(config.workers, static_cast<int>(manifest.entries.size())));
  std::vector<std::thread> threads;
  for (int t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  GenerateSummary summary;
  DatasetManifest ds_manifest;
  ds_manifest.dataset_seed = config.dataset_seed;
  ds_manifest.config = config.to_json();
  std::vector<DatasetRecord> records;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    VideoOutcome& o = outcomes[i];
    ++summary.videos;
    if (o.failed) {
      ++summary.videos_failed;
    } else {
      ds_manifest.videos.push_back(manifest.entries[i].video_id);
    }
    for (auto& s : o.skips) ds_manifest.skips.push_back(std::move(s));
    for (auto& w : o.warnings) ds_manifest.warnings.push_back(std::move(w));
    for (auto& r : o.records) records.push_back(std::move(r));
  }
  summary.records = static_cast<int>(records.size());
  for (const auto& r : records) ++summary.counts[r.instance.kind];
  summary.skips = ds_manifest.skips;
  summary.warnings = ds_manifest.warnings;
  emit(std::move(records), std::move(ds_manifest), config.out_dir, EmitOptions{config.strip_answers});
  return summary;
}

}  // namespace fragqa
