#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wag/providers.hpp"
#include "wag/subject.hpp"

namespace wag {

enum class AnomalyLevel { Low, Medium, High, Missing, NA };

const char* to_string(AnomalyLevel level);
AnomalyLevel anomaly_level_from_string(const std::string& s);

enum class QueryKind { Single, Multiple };

// Data-grounded seed for one generated query.
struct QueryInputTuple {
  QueryKind kind = QueryKind::Single;
  std::vector<std::string> metrics;  // 1 for single, 2-3 for multiple
  Date timestamp{};
  std::optional<int> window;  // nullopt = all history
  std::vector<AnomalyLevel> anomaly_levels;      // per metric
  std::vector<std::optional<double>> zetas;      // normalized; nullopt when undefined
};

struct QueryCategory {
  std::string name;
  double openness_lo = 0.0;
  double openness_hi = 1.0;
  QueryKind kind = QueryKind::Single;
};

// The fixed category table with its openness ranges.
const std::vector<QueryCategory>& query_categories();

// {1, 7, 14, 30, all}.
std::vector<std::optional<int>> default_windows();

// Per numeric metric and window: one timestamp per occupied anomaly tercile
// of the zeta distribution, plus one missing-value timestamp when any
// exists. Per textual metric: one timestamp with a present value.
std::vector<QueryInputTuple> sample_single_metric_inputs(
    const SubjectData& subject, const std::vector<std::optional<int>>& windows,
    std::uint64_t seed);

struct MultiSampleResult {
  std::vector<QueryInputTuple> tuples;
  bool insufficient = false;  // fewer than 2 numeric metrics
};

// 2-3 numeric metrics sharing a fully-present timestamp, window uniform over
// default_windows(). Tuples without a common-valid timestamp are resampled
// up to 20 times, then skipped.
MultiSampleResult sample_multi_metric_inputs(const SubjectData& subject, int count,
                                             std::uint64_t seed);

// Uniform openness inside the named category's range.
double assign_openness(const std::string& category_name, std::uint64_t seed);

// Templated natural-language question for a tuple (offline QueryGen stand-in).
std::string stub_question(const QueryInputTuple& tuple, const QueryCategory& category);

// Seeded category pick (matching the tuple kind) plus openness draw.
ParsedQuery tuple_to_query(const QueryInputTuple& tuple, std::uint64_t seed);

struct RankRecord {
  std::string query_id;
  std::map<std::string, int> ranks;  // method -> rank, a permutation of 1..N
};

struct MethodSummary {
  double mean_rank = 0.0;
  double win_rate = 0.0;  // fraction of records ranked first
};

// Validates that every record covers the same methods with a tie-free
// 1..N permutation; win rates sum to 1.
std::map<std::string, MethodSummary> aggregate_rankings(const std::vector<RankRecord>& records);

std::string tuple_to_json_line(const QueryInputTuple& tuple);
QueryInputTuple tuple_from_json_line(const std::string& line);
RankRecord rank_record_from_json_line(const std::string& line);

}  // namespace wag
