// SPDX-License-Identifier: Apache-2.0

#include "fragqa/dataset/record.hpp"

#include <numeric>
#include <set>

#include "fragqa/core/errors.hpp"

namespace fragqa {

using nlohmann::json;

namespace {

const std::set<std::string> kRecordFields = {"id",       "kind",    "video_id", "frame_refs",        "presented_indices",
                                             "question", "options", "answer",   "meta",              "generator_version",
                                             "dataset_seed"};
const std::set<std::string> kMetaFields = {"m",           "set_id",      "fragment_id", "strategy",
                                           "range_mode",  "speed_label", "permutation", "target"};

class FieldReader {
 public:
  FieldReader(const json& obj, std::string id, std::string prefix = "")
      : obj_(obj), id_(std::move(id)), prefix_(std::move(prefix)) {}

  template <typename T>
  T get(const char* field) const {
    if (!obj_.contains(field)) fail(field, "missing");
    return as<T>(field);
  }

  template <typename T>
  std::optional<T> optional(const char* field) const {
    if (!obj_.contains(field)) return std::nullopt;
    return as<T>(field);
  }

  [[noreturn]] void fail(const std::string& field, const std::string& reason) const {
    throw ValidationError(id_, prefix_ + field, reason);
  }

 private:
  template <typename T>
  T as(const char* field) const {
    const json& v = obj_.at(field);
    if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(field, "expected a string");
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) fail(field, "expected a non-negative integer");
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) fail(field, "expected an integer");
    } else if constexpr (std::is_same_v<T, std::vector<int>>) {
      if (!v.is_array()) fail(field, "expected an array of integers");
      for (const auto& e : v) {
        if (!e.is_number_integer()) fail(field, "expected an array of integers");
      }
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      if (!v.is_array()) fail(field, "expected an array of strings");
      for (const auto& e : v) {
        if (!e.is_string()) fail(field, "expected an array of strings");
      }
    }
    try {
      return v.get<T>();
    } catch (const json::exception& e) {
      fail(field, e.what());
    }
  }

  const json& obj_;
  std::string id_;
  std::string prefix_;
};

json meta_to_json(const TaskMeta& meta, bool include_answer) {
  json j = {{"m", meta.m}};
  if (meta.set_id) j["set_id"] = *meta.set_id;
  if (meta.fragment_id) j["fragment_id"] = *meta.fragment_id;
  if (meta.strategy) j["strategy"] = std::string(to_string(*meta.strategy));
  if (meta.range_mode) j["range_mode"] = std::string(to_string(*meta.range_mode));
  if (meta.target) j["target"] = *meta.target;
  if (include_answer) {
    if (meta.speed_label) j["speed_label"] = std::string(to_string(*meta.speed_label));
    if (meta.permutation) j["permutation"] = *meta.permutation;
  }
  return j;
}

TaskMeta meta_from_json(const json& j, const std::string& id) {
  FieldReader top(json::object(), id);
  if (!j.is_object()) top.fail("meta", "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!kMetaFields.count(k)) top.fail("meta." + k, "unknown field");
  }
  FieldReader r(j, id, "meta.");
  TaskMeta meta;
  meta.m = r.get<int>("m");
  meta.set_id = r.optional<int>("set_id");
  meta.fragment_id = r.optional<std::string>("fragment_id");
  if (auto s = r.optional<std::string>("strategy")) {
    meta.strategy = parse_strategy(*s);
    if (!meta.strategy) r.fail("strategy", "unknown strategy '" + *s + "'");
  }
  if (auto s = r.optional<std::string>("range_mode")) {
    meta.range_mode = parse_range_mode(*s);
    if (!meta.range_mode) r.fail("range_mode", "unknown range mode '" + *s + "'");
  }
  if (auto s = r.optional<std::string>("speed_label")) {
    meta.speed_label = parse_speed(*s);
    if (!meta.speed_label) r.fail("speed_label", "unknown speed label '" + *s + "'");
  }
  meta.permutation = r.optional<std::vector<int>>("permutation");
  meta.target = r.optional<std::string>("target");
  return meta;
}

}  // namespace

int DatasetManifest::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0, [](int acc, const auto& kv) { return acc + kv.second; });
}

json record_to_json(const DatasetRecord& record, bool include_answer) {
  const TaskInstance& inst = record.instance;
  json options = json::array();
  for (const auto& o : inst.option_set.options) options.push_back({{"label", o.label}, {"text", o.text}});
  json j = {{"id", inst.id},
            {"kind", std::string(to_string(inst.kind))},
            {"video_id", inst.video_id},
            {"frame_refs", record.frame_refs},
            {"presented_indices", inst.presented_indices},
            {"question", inst.question},
            {"options", std::move(options)},
            {"meta", meta_to_json(inst.meta, include_answer)},
            {"generator_version", record.generator_version},
            {"dataset_seed", record.dataset_seed}};
  if (include_answer && record.has_answer) j["answer"] = inst.answer();
  return j;
}

DatasetRecord record_from_json(const json& j, bool answer_required) {
  if (!j.is_object()) throw ValidationError("?", "<record>", "expected a JSON object");
  std::string id = "?";
  if (j.contains("id") && j["id"].is_string()) id = j["id"].get<std::string>();
  FieldReader r(j, id);
  for (const auto& [k, v] : j.items()) {
    if (!kRecordFields.count(k)) r.fail(k, "unknown field");
  }
  DatasetRecord rec;
  TaskInstance& inst = rec.instance;
  inst.id = r.get<std::string>("id");
  const auto kind_name = r.get<std::string>("kind");
  const auto kind = parse_task_kind(kind_name);
  if (!kind) r.fail("kind", "unknown task kind '" + kind_name + "'");
  inst.kind = *kind;
  inst.video_id = r.get<std::string>("video_id");
  rec.frame_refs = r.get<std::vector<std::string>>("frame_refs");
  inst.presented_indices = r.get<std::vector<int>>("presented_indices");
  inst.question = r.get<std::string>("question");
  if (!j.contains("options")) r.fail("options", "missing");
  if (!j["options"].is_array()) r.fail("options", "expected an array");
  for (const auto& o : j["options"]) {
    if (!o.is_object() || o.size() != 2 || !o.contains("label") || !o.contains("text") || !o["label"].is_string() ||
        !o["text"].is_string()) {
      r.fail("options", "each option must be {label: string, text: string}");
    }
    inst.option_set.options.push_back({o["label"].get<std::string>(), o["text"].get<std::string>()});
  }
  if (answer_required || j.contains("answer")) {
    inst.option_set.key_label = r.get<std::string>("answer");
    rec.has_answer = true;
  } else {
    rec.has_answer = false;
  }
  if (!j.contains("meta")) r.fail("meta", "missing");
  inst.meta = meta_from_json(j["meta"], inst.id);
  rec.generator_version = r.get<std::string>("generator_version");
  rec.dataset_seed = r.get<std::uint64_t>("dataset_seed");
  return rec;
}

json manifest_to_json(const DatasetManifest& m) {
  json counts = json::object();
  for (TaskKind k : kAllTaskKinds) {
    auto it = m.counts.find(k);
    counts[std::string(to_string(k))] = it == m.counts.end() ? 0 : it->second;
  }
  auto log = [](const std::vector<LogEntry>& entries) {
    json arr = json::array();
    for (const auto& e : entries) arr.push_back({{"video_id", e.video_id}, {"reason", e.reason}});
    return arr;
  };
  json j = {{"version", m.version},
            {"generator_version", m.generator_version},
            {"dataset_seed", m.dataset_seed},
            {"counts", std::move(counts)},
            {"total", m.total()},
            {"videos", m.videos},
            {"skips", log(m.skips)},
            {"warnings", log(m.warnings)},
            {"config", m.config},
            {"answers_stripped", m.answers_stripped}};
  if (m.answers_stripped) {
    j["data_file"] = kQueryFileName;
    j["key_file"] = kKeyFileName;
  } else {
    j["data_file"] = kDataFileName;
  }
  return j;
}

DatasetManifest manifest_from_json(const json& j) {
  FieldReader r(j, "<manifest>");
  if (!j.is_object()) r.fail("<manifest>", "expected a JSON object");
  DatasetManifest m;
  m.version = r.get<int>("version");
  m.generator_version = r.get<std::string>("generator_version");
  m.dataset_seed = r.get<std::uint64_t>("dataset_seed");
  if (!j.contains("counts") || !j["counts"].is_object()) r.fail("counts", "expected an object");
  for (const auto& [k, v] : j["counts"].items()) {
    auto kind = parse_task_kind(k);
    if (!kind) r.fail("counts." + k, "unknown task kind");
    if (!v.is_number_integer() || v.get<int>() < 0) r.fail("counts." + k, "expected a non-negative integer");
    m.counts[*kind] = v.get<int>();
  }
  if (r.get<int>("total") != m.total()) r.fail("total", "does not equal the sum of counts");
  m.videos = r.get<std::vector<std::string>>("videos");
  for (const char* field : {"skips", "warnings"}) {
    if (!j.contains(field) || !j[field].is_array()) r.fail(field, "expected an array");
    auto& dst = std::string_view(field) == "skips" ? m.skips : m.warnings;
    for (const auto& e : j[field]) {
      if (!e.is_object() || !e.contains("video_id") || !e.contains("reason") || !e["video_id"].is_string() ||
          !e["reason"].is_string()) {
        r.fail(field, "entries must be {video_id, reason}");
      }
      dst.push_back({e["video_id"].get<std::string>(), e["reason"].get<std::string>()});
    }
  }
  if (j.contains("config")) m.config = j["config"];
  if (!j.contains("answers_stripped") || !j["answers_stripped"].is_boolean()) {
    r.fail("answers_stripped", "expected a boolean");
  }
  m.answers_stripped = j["answers_stripped"].get<bool>();
  return m;
}

}  // namespace fragqa
