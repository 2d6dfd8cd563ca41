// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fragqa/core/rng.hpp"
#include "fragqa/dataset/record.hpp"

namespace fragqa {

struct ResponseRecord {
  std::string id;
  std::string response_text;
};

/// Reads {id, response_text} JSON Lines. Throws ValidationError on malformed
/// lines or repeated ids.
std::vector<ResponseRecord> load_responses(const std::filesystem::path& path);

struct Cell {
  long long n = 0;
  long long correct = 0;

  double accuracy() const { return n == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(n); }
  Cell& operator+=(const Cell& o) {
    n += o.n;
    correct += o.correct;
    return *this;
  }
};

/// Report columns. Localization variants share one column; every other task
/// kind has its own.
enum class Column { speed, counting, localization, consistency, adjust_or_not, rearrangement };

inline constexpr std::array<Column, 6> kAllColumns = {Column::speed,       Column::counting,      Column::localization,
                                                      Column::consistency, Column::adjust_or_not, Column::rearrangement};

Column column_of(TaskKind kind);
std::string_view column_name(Column c);
bool is_fragment_column(Column c);

/// Frame-count axis for a record: fragment size for fragment tasks, 0 for
/// whole-video speed questions.
int frame_count_of(const TaskInstance& inst);

struct ScoreReport {
  std::map<std::pair<TaskKind, int>, Cell> cells;  // (kind, frame count)
  long long unparseable = 0;
  std::vector<std::string> missing_ids;
  // Set by random_baseline: 100 / option count per kind present.
  std::map<TaskKind, double> analytic;

  bool empty() const { return cells.empty(); }
  Cell kind_total(TaskKind kind) const;
  std::map<Column, Cell> column_totals() const;
  /// Unweighted mean of the fragment-level column accuracies present.
  std::optional<double> fragment_average() const;
  /// Unweighted mean of all column accuracies present.
  std::optional<double> overall_average() const;
};

/// Scores responses against keys. Records without a response count as
/// unparseable (incorrect) and are listed in missing_ids. Throws ScoringError
/// for response ids that are not in the dataset.
ScoreReport score_run(const std::vector<DatasetRecord>& dataset, const std::vector<ResponseRecord>& responses);

/// Monte-Carlo uniform guesser over `trials` passes, plus analytic chance
/// levels.
ScoreReport random_baseline(const std::vector<DatasetRecord>& dataset, int trials, const RngKey& key);

enum class ReportFormat { markdown, csv };

std::optional<ReportFormat> parse_report_format(std::string_view name);

/// Markdown: one column per task kind, one row per frame count plus a totals
/// row, aggregates below. CSV: kind,frame_count,n,correct,accuracy with one
/// row per non-empty cell followed by aggregate rows.
std::string render_report(const ScoreReport& report, ReportFormat format);

/// Two-decimal fixed rendering used in every report.
std::string format_percent(double value);

}  // namespace fragqa
