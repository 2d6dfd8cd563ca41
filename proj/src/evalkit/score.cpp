// SPDX-License-Identifier: Apache-2.0

#include "fragqa/evalkit/score.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <unordered_map>

#include "fragqa/core/errors.hpp"
#include "fragqa/evalkit/parse.hpp"

namespace fragqa {

using nlohmann::json;

std::vector<ResponseRecord> load_responses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("<responses>", path.filename().string(), "cannot open " + path.string());
  std::vector<ResponseRecord> out;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(where, "<response>", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
      throw ValidationError(where, "id", "missing or not a string");
    }
    // Key files ({id, answer}) are accepted as responses so keys can be scored
    // against themselves.
    const char* text_field = j.contains("response_text") ? "response_text" : "answer";
    if (!j.contains(text_field) || !j[text_field].is_string()) {
      throw ValidationError(j["id"].get<std::string>(), "response_text", "missing or not a string");
    }
    ResponseRecord r{j["id"].get<std::string>(), j[text_field].get<std::string>()};
    if (!seen.insert(r.id).second) throw ValidationError(r.id, "id", "duplicate response id");
    out.push_back(std::move(r));
  }
  return out;
}

Column column_of(TaskKind kind) {
  switch (kind) {
    case TaskKind::speed: return Column::speed;
    case TaskKind::counting: return Column::counting;
    case TaskKind::localization_first:
    case TaskKind::localization_last:
    case TaskKind::localization_exist: return Column::localization;
    case TaskKind::consistency: return Column::consistency;
    case TaskKind::adjust_or_not: return Column::adjust_or_not;
    case TaskKind::rearrangement: return Column::rearrangement;
  }
  return Column::counting;
}

std::string_view column_name(Column c) {
  switch (c) {
    case Column::speed: return "Speed";
    case Column::counting: return "FCnt";
    case Column::localization: return "MoO";
    case Column::consistency: return "FCmp";
    case Column::adjust_or_not: return "AoN";
    case Column::rearrangement: return "Rearr";
  }
  return "?";
}

bool is_fragment_column(Column c) { return c != Column::speed; }

int frame_count_of(const TaskInstance& inst) { return inst.kind == TaskKind::speed ? 0 : inst.meta.m; }

Cell ScoreReport::kind_total(TaskKind kind) const {
  Cell total;
  for (const auto& [k, cell] : cells) {
    if (k.first == kind) total += cell;
  }
  return total;
}

std::map<Column, Cell> ScoreReport::column_totals() const {
  std::map<Column, Cell> out;
  for (const auto& [k, cell] : cells) out[column_of(k.first)] += cell;
  return out;
}

namespace {

std::optional<double> mean_accuracy(const std::map<Column, Cell>& cols, bool fragment_only) {
  double sum = 0;
  int count = 0;
  for (const auto& [c, cell] : cols) {
    if (cell.n == 0 || (fragment_only && !is_fragment_column(c))) continue;
    sum += cell.accuracy();
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

}  // namespace

std::optional<double> ScoreReport::fragment_average() const { return mean_accuracy(column_totals(), true); }

std::optional<double> ScoreReport::overall_average() const { return mean_accuracy(column_totals(), false); }

ScoreReport score_run(const std::vector<DatasetRecord>& dataset, const std::vector<ResponseRecord>& responses) {
  std::unordered_map<std::string, const DatasetRecord*> by_id;
  for (const auto& r : dataset) {
    if (!r.has_answer) throw std::invalid_argument("dataset record " + r.instance.id + " has no answer key");
    by_id.emplace(r.instance.id, &r);
  }
  std::unordered_map<std::string, const ResponseRecord*> response_of;
  std::vector<std::string> unknown;
  for (const auto& resp : responses) {
    if (!by_id.count(resp.id)) {
      unknown.push_back(resp.id);
    } else {
      response_of[resp.id] = &resp;
    }
  }
  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    throw ScoringError(std::move(unknown));
  }

  ScoreReport report;
  for (const auto& rec : dataset) {
    const TaskInstance& inst = rec.instance;
    Cell& cell = report.cells[{inst.kind, frame_count_of(inst)}];
    ++cell.n;
    auto it = response_of.find(inst.id);
    if (it == response_of.end()) {
      report.missing_ids.push_back(inst.id);
      ++report.unparseable;
      continue;
    }
    const ParsedChoice choice = parse_response(it->second->response_text, inst.option_set);
    if (!choice.label) {
      ++report.unparseable;
      continue;
    }
    if (*choice.label == inst.answer()) ++cell.correct;
  }
  std::sort(report.missing_ids.begin(), report.missing_ids.end());
  return report;
}

ScoreReport random_baseline(const std::vector<DatasetRecord>& dataset, int trials, const RngKey& key) {
  if (trials < 1) throw std::invalid_argument("random_baseline needs at least one trial");
  ScoreReport report;
  Rng rng(key);
  // Cell pointers are stable in std::map; look them up once.
  std::vector<Cell*> cell_of;
  cell_of.reserve(dataset.size());
  for (const auto& rec : dataset) {
    if (!rec.has_answer) throw std::invalid_argument("dataset record " + rec.instance.id + " has no answer key");
    cell_of.push_back(&report.cells[{rec.instance.kind, frame_count_of(rec.instance)}]);
    report.analytic[rec.instance.kind] = 100.0 / option_cardinality(rec.instance.kind);
  }
  for (int t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& opts = dataset[i].instance.option_set;
      const auto pick = static_cast<std::size_t>(rng.below(opts.options.size()));
      ++cell_of[i]->n;
      if (opts.options[pick].label == opts.key_label) ++cell_of[i]->correct;
    }
  }
  return report;
}

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  if (name == "csv") return ReportFormat::csv;
  return std::nullopt;
}

std::string format_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

namespace {

std::string render_markdown(const ScoreReport& report) {
  std::string out = "| Frames |";
  std::string rule = "|---|";
  for (TaskKind k : kAllTaskKinds) {
    out += " " + std::string(to_string(k)) + " |";
    rule += "---|";
  }
  out += "\n" + rule + "\n";
  if (report.empty()) return out;

  std::set<int> frame_counts;
  for (const auto& [k, cell] : report.cells) frame_counts.insert(k.second);
  auto row = [&](const std::string& label, auto&& accuracy_for) {
    std::string line = "| " + label + " |";
    for (TaskKind k : kAllTaskKinds) {
      const std::optional<double> acc = accuracy_for(k);
      line += " " + (acc ? format_percent(*acc) : std::string("-")) + " |";
    }
    return line + "\n";
  };
  for (int fc : frame_counts) {
    out += row(fc == 0 ? std::string("video") : std::to_string(fc), [&](TaskKind k) -> std::optional<double> {
      auto it = report.cells.find({k, fc});
      if (it == report.cells.end() || it->second.n == 0) return std::nullopt;
      return it->second.accuracy();
    });
  }
  out += row("All", [&](TaskKind k) -> std::optional<double> {
    const Cell c = report.kind_total(k);
    if (c.n == 0) return std::nullopt;
    return c.accuracy();
  });
  if (!report.analytic.empty()) {
    out += row("Random (analytic)", [&](TaskKind k) -> std::optional<double> {
      auto it = report.analytic.find(k);
      if (it == report.analytic.end()) return std::nullopt;
      return it->second;
    });
  }

  out += "\n| Column | n | Accuracy |\n|---|---|---|\n";
  for (const auto& [c, cell] : report.column_totals()) {
    out += "| " + std::string(column_name(c)) + " | " + std::to_string(cell.n) + " | " +
           format_percent(cell.accuracy()) + " |\n";
  }
  if (auto fg = report.fragment_average()) out += "| FG-Avg | | " + format_percent(*fg) + " |\n";
  if (auto all = report.overall_average()) out += "| Avg | | " + format_percent(*all) + " |\n";

  out += "\nUnparseable responses: " + std::to_string(report.unparseable) + "\n";
  if (!report.missing_ids.empty()) {
    out += "Missing response ids (" + std::to_string(report.missing_ids.size()) + "):";
    for (const auto& id : report.missing_ids) out += " " + id;
    out += "\n";
  }
  return out;
}

std::string render_csv(const ScoreReport& report) {
  std::string out = "kind,frame_count,n,correct,accuracy\n";
  for (const auto& [k, cell] : report.cells) {
    if (cell.n == 0) continue;
    out += std::string(to_string(k.first)) + "," + (k.second == 0 ? std::string("all") : std::to_string(k.second)) +
           "," + std::to_string(cell.n) + "," + std::to_string(cell.correct) + "," + format_percent(cell.accuracy()) +
           "\n";
  }
  if (auto fg = report.fragment_average()) out += "fragment_average,all,,," + format_percent(*fg) + "\n";
  if (auto all = report.overall_average()) out += "overall_average,all,,," + format_percent(*all) + "\n";
  for (const auto& [k, value] : report.analytic) {
    out += "random_analytic:" + std::string(to_string(k)) + ",all,,," + format_percent(value) + "\n";
  }
  return out;
}

}  // namespace

std::string render_report(const ScoreReport& report, ReportFormat format) {
  return format == ReportFormat::markdown ? render_markdown(report) : render_csv(report);
}

}  // namespace fragqa
