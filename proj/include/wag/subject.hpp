#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wag/dates.hpp"
#include "wag/graph.hpp"

namespace wag {

// One dated observation. present = false records an explicit missing value
// at a present date, distinct from an absent date.
struct SeriesRow {
  Date date;
  bool present = false;
  double value = 0.0;   // meaningful when present and the series is numeric
  std::string text;     // meaningful when present and the series is textual
};

struct MetricSeries {
  ValueKind kind = ValueKind::Numeric;
  std::vector<SeriesRow> rows;  // dates strictly increasing
};

struct SubjectData {
  std::string subject_id;
  std::map<std::string, MetricSeries> series;  // metric name -> series

  // Exact name first, then normalized-name comparison.
  const MetricSeries* find_series(std::string_view metric) const;
};

// CSV with header "date,<metric1>,...". Dates ISO-8601; an empty cell is a
// missing observation. Rows are sorted by date; duplicate dates and
// unparsable dates are errors. A column is numeric iff every non-empty cell
// parses as a decimal number.
SubjectData subject_from_csv(std::istream& in, std::string subject_id);
SubjectData load_subject_csv(const std::filesystem::path& source, std::string subject_id);

// One CSV per subject in the directory; subject id = file stem. Sorted by id.
std::vector<SubjectData> load_cohort(const std::filesystem::path& dir);

// MD_s: mean over metrics of (missing count / row count).
double missing_rate(const SubjectData& subject);

// VL_s: max over all dates minus min, in whole days.
int valid_period(const SubjectData& subject);

struct VariabilityResult {
  double cv = 0.0;
  bool no_eligible_metrics = false;
};

// CV_s: sum over numeric metrics of sample-sd / mean. Metrics with fewer
// than 2 present values or |mean| < 1e-12 are skipped.
VariabilityResult variability(const SubjectData& subject);

// MI_p: sum of binned mutual information over unordered numeric-metric
// pairs, computed on pairwise-complete observations. Pairs with fewer than
// min_samples complete observations contribute 0.
double pairwise_mi(const SubjectData& subject, int bins, int min_samples = 10);

struct SelectionThresholds {
  double max_missing = 0.5;
  int min_valid_days = 30;
};

struct SelectionResult {
  std::vector<std::string> ids;
  bool shortfall = false;  // fewer eligible subjects than requested
};

// Filter by completeness/duration, then sample round-robin across CV deciles
// until n subjects are collected. Deterministic under a fixed seed.
SelectionResult select_participants(const std::vector<SubjectData>& cohort, int n,
                                    std::uint64_t seed,
                                    const SelectionThresholds& thresholds = {});

struct SelectionStats {
  double md = 0.0;
  int vl = 0;
  double cv = 0.0;
  bool cv_no_eligible = false;
  double mi = 0.0;
};

SelectionStats selection_stats(const SubjectData& subject, int bins = 8);

}  // namespace wag
