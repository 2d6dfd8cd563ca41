// SPDX-License-Identifier: Apache-2.0

#include "fragqa/dataset/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "fragqa/augment/speed.hpp"
#include "fragqa/core/errors.hpp"
#include "fragqa/core/permutation.hpp"
#include "fragqa/taskgen/generators.hpp"

namespace fragqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_lines(const fs::path& path, const std::vector<json>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw EmitError("cannot write " + path.string());
  for (const auto& j : lines) out << j.dump() << '\n';
  if (!out) throw EmitError("write failed for " + path.string());
}

std::vector<json> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("<dataset>", path.filename().string(), "cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw ValidationError("line " + std::to_string(line_no), path.filename().string(),
                            std::string("malformed JSON: ") + e.what());
    }
  }
  return out;
}

std::set<std::string> option_texts(const OptionSet& set) {
  std::set<std::string> out;
  for (const auto& o : set.options) out.insert(o.text);
  return out;
}

bool is_decimal(const std::string& s) {
  return !s.empty() && s.size() < 4 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void check_kind_semantics(const DatasetRecord& rec) {
  const TaskInstance& inst = rec.instance;
  const auto& idx = inst.presented_indices;
  auto fail = [&](const char* field, const std::string& reason) { throw ValidationError(inst.id, field, reason); };
  const int n = static_cast<int>(idx.size());
  const std::string key = inst.option_set.key_text();
  const bool keyed = rec.has_answer;
  const std::set<std::string> yes_no = {std::string(kYes), std::string(kNo), std::string(kNotSure)};

  switch (inst.kind) {
    case TaskKind::counting:
      if (!std::is_sorted(idx.begin(), idx.end()) || std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
        fail("presented_indices", "counting frames must be strictly increasing");
      }
      if (inst.meta.m != n) fail("meta.m", "does not match the number of presented frames");
      for (const auto& o : inst.option_set.options) {
        if (!is_decimal(o.text)) fail("options", "counting options must be decimal counts");
      }
      if (keyed && key != std::to_string(n)) fail("answer", "key does not equal the presented frame count");
      break;
    case TaskKind::consistency:
      if (n != 2) fail("presented_indices", "consistency presents exactly two frames");
      if (idx[0] > idx[1]) fail("presented_indices", "consistency frames must be in chronological order");
      if (inst.meta.m < 2) fail("meta.m", "fragment size must be at least 2");
      if (option_texts(inst.option_set) != yes_no) fail("options", "options must be Yes / No / Not sure");
      if (keyed && key != (idx[0] == idx[1] ? kYes : kNo)) {
        fail("answer", "key must be Yes exactly when both slots show the same frame");
      }
      break;
    case TaskKind::localization_first:
    case TaskKind::localization_last:
    case TaskKind::localization_exist:
      if (!std::is_sorted(idx.begin(), idx.end()) || std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
        fail("presented_indices", "localization frames must be strictly increasing");
      }
      if (inst.meta.m != n) fail("meta.m", "does not match the number of presented frames");
      if (keyed && key == kDoesNotAppear) fail("answer", "the keyed option must name a frame");
      break;
    case TaskKind::adjust_or_not: {
      if (n < 3) fail("presented_indices", "disorder detection presents at least 3 frames");
      if (inst.meta.m != n) fail("meta.m", "does not match the number of presented frames");
      std::vector<int> sorted = idx;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        fail("presented_indices", "frames must be distinct");
      }
      if (option_texts(inst.option_set) != yes_no) fail("options", "options must be Yes / No / Not sure");
      if (keyed && key != (sorted != idx ? kYes : kNo)) {
        fail("answer", "key must be Yes exactly when the presented order is not chronological");
      }
      if (inst.meta.permutation) {
        try {
          if (apply_permutation(Permutation(*inst.meta.permutation), sorted) != idx) {
            fail("meta.permutation", "does not produce the presented order");
          }
        } catch (const std::invalid_argument& e) {
          fail("meta.permutation", e.what());
        }
      }
      break;
    }
    case TaskKind::rearrangement: {
      if (n < 3) fail("presented_indices", "rearrangement presents at least 3 frames");
      if (inst.meta.m != n) fail("meta.m", "does not match the number of presented frames");
      for (const auto& o : inst.option_set.options) {
        try {
          if (Permutation::from_display(o.text).size() != n) fail("options", "option permutation has the wrong size");
        } catch (const std::invalid_argument&) {
          fail("options", "option '" + o.text + "' is not a permutation");
        }
      }
      if (keyed) {
        const auto restored = apply_permutation(Permutation::from_display(key), idx);
        for (std::size_t i = 1; i < restored.size(); ++i) {
          if (restored[i - 1] >= restored[i]) fail("answer", "key permutation does not restore chronological order");
        }
      }
      if (inst.meta.permutation) {
        try {
          std::vector<int> sorted = idx;
          std::sort(sorted.begin(), sorted.end());
          if (apply_permutation(Permutation(*inst.meta.permutation), sorted) != idx) {
            fail("meta.permutation", "does not produce the presented order");
          }
        } catch (const std::invalid_argument& e) {
          fail("meta.permutation", e.what());
        }
      }
      break;
    }
    case TaskKind::speed: {
      if (n < 1) fail("presented_indices", "speed questions present at least one frame");
      if (!std::is_sorted(idx.begin(), idx.end())) fail("presented_indices", "speed frames must be chronological");
      const std::set<std::string> speeds = {"fast", "slow", "normal", "no speed"};
      if (option_texts(inst.option_set) != speeds) fail("options", "options must be the four fixed speeds");
      if (keyed && inst.meta.speed_label && key != display_name(*inst.meta.speed_label)) {
        fail("answer", "key does not match meta.speed_label");
      }
      break;
    }
  }
}

}  // namespace

EmittedFiles emit(std::vector<DatasetRecord> records, DatasetManifest manifest, const fs::path& out_dir,
                  EmitOptions options) {
  std::sort(records.begin(), records.end(),
            [](const DatasetRecord& a, const DatasetRecord& b) { return a.instance.id < b.instance.id; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].instance.id == records[i - 1].instance.id) {
      throw EmitError("duplicate record id " + records[i].instance.id);
    }
  }
  manifest.counts.clear();
  for (TaskKind k : kAllTaskKinds) manifest.counts[k] = 0;
  for (const auto& r : records) ++manifest.counts[r.instance.kind];
  manifest.answers_stripped = options.strip_answers;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw EmitError("cannot create " + out_dir.string() + ": " + ec.message());

  EmittedFiles files;
  std::vector<json> lines;
  lines.reserve(records.size());
  for (const auto& r : records) lines.push_back(record_to_json(r, !options.strip_answers));
  const fs::path data_path = out_dir / (options.strip_answers ? kQueryFileName : kDataFileName);
  write_lines(data_path, lines);
  files.paths.push_back(data_path);
  if (options.strip_answers) {
    std::vector<json> keys;
    keys.reserve(records.size());
    for (const auto& r : records) keys.push_back({{"id", r.instance.id}, {"answer", r.instance.answer()}});
    const fs::path key_path = out_dir / kKeyFileName;
    write_lines(key_path, keys);
    files.paths.push_back(key_path);
  }
  // Remove a stale file of the other layout so a directory never holds both.
  fs::remove(out_dir / (options.strip_answers ? kDataFileName : kQueryFileName), ec);
  if (!options.strip_answers) fs::remove(out_dir / kKeyFileName, ec);

  const fs::path manifest_path = out_dir / kManifestFileName;
  std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
  if (!out) throw EmitError("cannot write " + manifest_path.string());
  out << manifest_to_json(manifest).dump(2) << '\n';
  if (!out) throw EmitError("write failed for " + manifest_path.string());
  files.paths.push_back(manifest_path);
  return files;
}

void validate_record(const DatasetRecord& rec, const fs::path& root, const ValidateOptions& options) {
  const TaskInstance& inst = rec.instance;
  auto fail = [&](const char* field, const std::string& reason) { throw ValidationError(inst.id, field, reason); };
  if (inst.id.empty()) fail("id", "empty");
  if (inst.video_id.empty()) fail("video_id", "empty");
  if (inst.question.empty()) fail("question", "empty");
  if (rec.generator_version.empty()) fail("generator_version", "empty");

  const auto& opts = inst.option_set.options;
  if (static_cast<int>(opts.size()) != option_cardinality(inst.kind)) {
    fail("options", std::string(to_string(inst.kind)) + " requires " + std::to_string(option_cardinality(inst.kind)) +
                        " options, found " + std::to_string(opts.size()));
  }
  std::set<std::string> texts;
  for (std::size_t i = 0; i < opts.size(); ++i) {
    if (opts[i].label != option_label(i)) fail("options", "labels must be A, B, C, ... in order without repeats");
    if (opts[i].text.empty()) fail("options", "empty option text");
    if (!texts.insert(opts[i].text).second) fail("options", "duplicate option text '" + opts[i].text + "'");
  }
  if (rec.has_answer && !inst.option_set.find(inst.option_set.key_label)) {
    fail("answer", "label '" + inst.option_set.key_label + "' is not an option");
  }

  if (rec.frame_refs.size() != inst.presented_indices.size()) {
    fail("frame_refs", "length differs from presented_indices");
  }
  for (int i : inst.presented_indices) {
    if (i < 0) fail("presented_indices", "negative frame index");
  }
  if (inst.meta.m < 1) fail("meta.m", "must be positive");
  check_kind_semantics(rec);

  if (options.check_frame_files) {
    for (const auto& ref : rec.frame_refs) {
      if (ref.empty() || fs::path(ref).is_absolute()) fail("frame_refs", "references must be relative paths");
      if (!fs::is_regular_file(root / ref)) fail("frame_refs", "missing frame file " + ref);
    }
  }
}

LoadedDataset load_and_validate(const fs::path& dir, ValidateOptions options) {
  const fs::path manifest_path = dir / kManifestFileName;
  std::ifstream in(manifest_path);
  if (!in) throw ValidationError("<manifest>", kManifestFileName, "cannot open " + manifest_path.string());
  json mj;
  try {
    mj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("<manifest>", kManifestFileName, std::string("malformed JSON: ") + e.what());
  }

  LoadedDataset ds;
  ds.manifest = manifest_from_json(mj);
  const bool stripped = ds.manifest.answers_stripped;
  const fs::path data_path = dir / (stripped ? kQueryFileName : kDataFileName);
  std::map<std::string, std::string> keys;
  if (stripped) {
    const fs::path key_path = dir / kKeyFileName;
    if (fs::exists(key_path)) {
      for (const auto& k : read_lines(key_path)) {
        if (!k.is_object() || k.size() != 2 || !k.contains("id") || !k.contains("answer") || !k["id"].is_string() ||
            !k["answer"].is_string()) {
          throw ValidationError("?", kKeyFileName, "key lines must be {id, answer}");
        }
        if (!keys.emplace(k["id"].get<std::string>(), k["answer"].get<std::string>()).second) {
          throw ValidationError(k["id"].get<std::string>(), "id", "duplicate key entry");
        }
      }
    } else {
      ds.query_only = true;
    }
  }

  std::set<std::string> ids;
  std::map<TaskKind, int> counts;
  for (const auto& line : read_lines(data_path)) {
    DatasetRecord rec = record_from_json(line, !stripped);
    if (stripped && rec.has_answer) {
      throw ValidationError(rec.instance.id, "answer", "query file must not carry answers");
    }
    if (stripped && !ds.query_only) {
      auto it = keys.find(rec.instance.id);
      if (it == keys.end()) throw ValidationError(rec.instance.id, "answer", "no entry in the key file");
      rec.instance.option_set.key_label = it->second;
      rec.has_answer = true;
      keys.erase(it);
    }
    if (!ids.insert(rec.instance.id).second) throw ValidationError(rec.instance.id, "id", "duplicate id");
    if (rec.dataset_seed != ds.manifest.dataset_seed) {
      throw ValidationError(rec.instance.id, "dataset_seed", "differs from the manifest seed");
    }
    validate_record(rec, dir, options);
    ++counts[rec.instance.kind];
    ds.records.push_back(std::move(rec));
  }
  if (!keys.empty()) throw ValidationError(keys.begin()->first, "id", "key file entry without a query record");
  for (TaskKind k : kAllTaskKinds) {
    const int declared = ds.manifest.counts.count(k) ? ds.manifest.counts.at(k) : 0;
    const int actual = counts.count(k) ? counts.at(k) : 0;
    if (declared != actual) {
      throw ValidationError("<manifest>", "counts." + std::string(to_string(k)),
                            "declares " + std::to_string(declared) + ", data file has " + std::to_string(actual));
    }
  }
  return ds;
}

}  // namespace fragqa
