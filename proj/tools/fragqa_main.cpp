// SPDX-License-Identifier: Apache-2.0

// fragqa: generate fragment-level video QA datasets and score model runs.
//
// Exit codes: 0 success, 2 usage or validation error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fragqa/core/errors.hpp"
#include "fragqa/dataset/dataset.hpp"
#include "fragqa/evalkit/score.hpp"
#include "fragqa/pipeline/fixture_spec.hpp"
#include "fragqa/pipeline/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitIo;
  }
  return kExitOk;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
  return out;
}

struct GenerateArgs {
  std::string manifest, out, strategy = "motion-salient", range_mode = "any", tasks = "all";
  std::string speed_factors = "2,2", speed_variants = "fast,slow", templates, decoder;
  std::uint64_t seed = 0;
  int sets = 3, frames_min = 3, frames_max = 5, downscale = 0, workers = 1;
  double shuffle_prob = 0.5, same_prob = 0.5;
  bool strip_answers = false, midpoints = false, blend = false;
};

int run_generate(const GenerateArgs& a) {
  fragqa::PipelineConfig cfg;
  try {
    cfg.manifest = a.manifest;
    cfg.out_dir = a.out;
    cfg.dataset_seed = a.seed;
    cfg.n_sets = a.sets;
    cfg.m_min = a.frames_min;
    cfg.m_max = a.frames_max;
    auto strategy = fragqa::parse_strategy(a.strategy);
    if (!strategy) throw std::invalid_argument("unknown strategy " + a.strategy);
    cfg.strategy = *strategy;
    cfg.salient_midpoints = a.midpoints;
    auto range = fragqa::parse_range_mode(a.range_mode);
    if (!range) throw std::invalid_argument("unknown range mode " + a.range_mode);
    cfg.range_mode = *range;
    cfg.p_same = a.same_prob;
    cfg.p_shuffle = a.shuffle_prob;
    cfg.tasks = fragqa::parse_task_families(a.tasks);
    const auto factors = parse_int_list(a.speed_factors);
    if (factors.size() != 2) throw std::invalid_argument("--speed-factors expects FAST,SLOW");
    cfg.speed.fast_factor = factors[0];
    cfg.speed.slow_factor = factors[1];
    cfg.speed.blend = a.blend;
    cfg.speed_variants.clear();
    std::stringstream in(a.speed_variants);
    for (std::string item; std::getline(in, item, ',');) {
      if (item.empty()) continue;
      auto s = fragqa::parse_speed(item);
      if (!s) throw std::invalid_argument("unknown speed variant " + item);
      cfg.speed_variants.push_back(*s);
    }
    cfg.strip_answers = a.strip_answers;
    if (a.downscale > 0) cfg.downscale = a.downscale;
    cfg.workers = a.workers;
    if (!a.templates.empty()) cfg.templates = a.templates;
    if (!a.decoder.empty()) cfg.decoder = a.decoder;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  fragqa::GenerateSummary summary;
  try {
    summary = fragqa::generate_dataset(cfg);
  } catch (const fragqa::ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fragqa::IngestError& e) {
    // Only manifest / template loading can throw this far.
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fragqa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  for (const auto& s : summary.skips) std::cerr << "skip " << s.video_id << ": " << s.reason << "\n";
  for (const auto& w : summary.warnings) std::cerr << "warning " << w.video_id << ": " << w.reason << "\n";
  std::cout << summary.line() << "\n";
  return summary.all_failed() ? kExitIo : kExitOk;
}

int run_validate(const std::string& dataset) {
  try {
    const auto ds = fragqa::load_and_validate(dataset);
    std::cout << "ok: " << ds.records.size() << " records" << (ds.query_only ? " (query-only)" : "") << "\n";
    return kExitOk;
  } catch (const fragqa::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_score(const std::string& dataset, const std::string& responses, const std::string& format,
              const std::string& out) {
  const auto fmt = fragqa::parse_report_format(format);
  if (!fmt) {
    std::cerr << "error: unknown format " << format << "\n";
    return kExitUsage;
  }
  try {
    const auto ds = fragqa::load_and_validate(dataset);
    if (ds.query_only) {
      std::cerr << "error: dataset has no key file; cannot score\n";
      return kExitUsage;
    }
    const auto report = fragqa::score_run(ds.records, fragqa::load_responses(responses));
    return write_output(fragqa::render_report(report, *fmt), out);
  } catch (const fragqa::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fragqa::ScoringError& e) {
    std::cerr << "scoring error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_baseline(const std::string& dataset, int trials, std::uint64_t seed, const std::string& format,
                 const std::string& out) {
  const auto fmt = fragqa::parse_report_format(format);
  if (!fmt || trials < 1) {
    std::cerr << "error: bad --format or --trials\n";
    return kExitUsage;
  }
  try {
    const auto ds = fragqa::load_and_validate(dataset);
    if (ds.query_only) {
      std::cerr << "error: dataset has no key file; cannot score\n";
      return kExitUsage;
    }
    const auto report =
        fragqa::random_baseline(ds.records, trials, fragqa::RngKey{seed, "", fragqa::Stream::baseline, 0});
    return write_output(fragqa::render_report(report, *fmt), out);
  } catch (const fragqa::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run_fixture(const std::string& spec_path, const std::string& out) {
  fragqa::FixtureBatch batch;
  try {
    std::ifstream in(spec_path);
    if (!in) throw std::invalid_argument("cannot open " + spec_path);
    batch = fragqa::parse_fixture_batch(nlohmann::json::parse(in));
  } catch (const std::exception& e) {
    std::cerr << "error: bad fixture spec: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const auto manifest = fragqa::write_fixture_batch(batch, out);
    std::cout << "wrote " << batch.videos.size() << " fixture videos; manifest " << manifest.string() << "\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fragment-level video QA dataset generator and scorer"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Build a task dataset from a video manifest");
  generate->add_option("--manifest", gen.manifest, "Video manifest (JSON)")->required();
  generate->add_option("--out", gen.out, "Output dataset directory")->required();
  generate->add_option("--seed", gen.seed, "Dataset seed");
  generate->add_option("--sets", gen.sets, "Fragments per video");
  generate->add_option("--frames-min", gen.frames_min, "Smallest fragment size");
  generate->add_option("--frames-max", gen.frames_max, "Largest fragment size");
  generate->add_option("--strategy", gen.strategy, "random|uniform|keyframe|motion-salient");
  generate->add_flag("--salient-midpoints", gen.midpoints, "Motion-salient sampling at bin midpoints");
  generate->add_option("--range-mode", gen.range_mode, "any|adjacent|nonadjacent");
  generate->add_option("--shuffle-prob", gen.shuffle_prob, "Probability a disorder question is shuffled");
  generate->add_option("--same-prob", gen.same_prob, "Probability a consistency pair repeats one frame");
  generate->add_option("--tasks", gen.tasks,
                       "Comma list of counting,consistency,localization,adjust_or_not,rearrangement,speed or all");
  generate->add_flag("--strip-answers", gen.strip_answers, "Write queries.jsonl + keys.jsonl");
  generate->add_option("--speed-factors", gen.speed_factors, "FAST,SLOW integer factors");
  generate->add_option("--speed-variants", gen.speed_variants, "Augmented variants: fast,slow,no_speed");
  generate->add_flag("--speed-blend", gen.blend, "Blend intermediate frames for slow motion");
  generate->add_option("--downscale", gen.downscale, "Box downscale factor before motion analysis");
  generate->add_option("--workers", gen.workers, "Worker threads");
  generate->add_option("--templates", gen.templates, "Extra question template file");
  generate->add_option("--decoder", gen.decoder, "Decoder command with {input} and {outdir}");

  std::string dataset, responses, format = "markdown", out, spec;
  int trials = 100;
  std::uint64_t seed = 0;

  auto* validate = app.add_subcommand("validate", "Validate an emitted dataset");
  validate->add_option("--dataset", dataset, "Dataset directory")->required();

  auto* score = app.add_subcommand("score", "Score model responses against a dataset");
  score->add_option("--dataset", dataset, "Dataset directory")->required();
  score->add_option("--responses", responses, "Responses (JSON Lines {id, response_text})")->required();
  score->add_option("--format", format, "markdown|csv");
  score->add_option("--out", out, "Report file (default stdout)");

  auto* baseline = app.add_subcommand("baseline", "Uniform random-guess baseline for a dataset");
  baseline->add_option("--dataset", dataset, "Dataset directory")->required();
  baseline->add_option("--trials", trials, "Monte-Carlo passes");
  baseline->add_option("--seed", seed, "Seed");
  baseline->add_option("--format", format, "markdown|csv");
  baseline->add_option("--out", out, "Report file (default stdout)");

  auto* fixture = app.add_subcommand("fixture", "Write synthetic frame directories with known motion");
  fixture->add_option("--spec", spec, "Fixture spec (JSON)")->required();
  fixture->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*generate) return run_generate(gen);
  if (*validate) return run_validate(dataset);
  if (*score) return run_score(dataset, responses, format, out);
  if (*baseline) return run_baseline(dataset, trials, seed, format, out);
  if (*fixture) return run_fixture(spec, out);
  return kExitUsage;
}
