#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wag/graph.hpp"
#include "wag/subject.hpp"

namespace wag::testing {

struct CohortSpec {
  int subjects = 10;
  int days = 90;
  int numeric_metrics = 6;
  bool textual_metric = true;   // adds a "Lifelog" text column
  double missing_rate = 0.05;   // per-cell
  std::uint64_t seed = 42;
  Date start = Date{18262};     // 2020-01-01
};

// Correlated daily series: metric j for subject s follows a shared latent
// walk plus noise that grows with j, so pairwise correlations differ by
// metric and the CV spread is wide enough for decile sampling.
std::vector<SubjectData> make_cohort(const CohortSpec& spec);

// The same subject rendered back to the CSV format the loader accepts.
std::string to_csv(const SubjectData& subject);

// Convenience numeric series builder; nan marks a missing observation.
MetricSeries numeric_series(Date start, const std::vector<double>& values);

std::vector<std::string> metric_names(const std::vector<SubjectData>& cohort);

}  // namespace wag::testing
