#include "wag/queryset.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>
#include <set>

#include "wag/local.hpp"
#include "wag/text.hpp"

namespace wag {

const char* to_string(AnomalyLevel level) {
  switch (level) {
    case AnomalyLevel::Low: return "low";
    case AnomalyLevel::Medium: return "medium";
    case AnomalyLevel::High: return "high";
    case AnomalyLevel::Missing: return "missing";
    case AnomalyLevel::NA: return "n/a";
  }
  return "n/a";
}

AnomalyLevel anomaly_level_from_string(const std::string& s) {
  for (AnomalyLevel l : {AnomalyLevel::Low, AnomalyLevel::Medium, AnomalyLevel::High,
                         AnomalyLevel::Missing, AnomalyLevel::NA}) {
    if (s == to_string(l)) return l;
  }
  throw ArgumentError("unknown anomaly level: '" + s + "'");
}

const std::vector<QueryCategory>& query_categories() {
  static const std::vector<QueryCategory> table = {
      {"General Knowledge", 0.2, 0.4, QueryKind::Single},
      {"Data Retrieval", 0.1, 0.3, QueryKind::Single},
      {"Trend Analysis", 0.4, 0.6, QueryKind::Single},
      {"Comparative Insight", 0.5, 0.7, QueryKind::Single},
      {"Anomaly Detection", 0.6, 0.8, QueryKind::Single},
      {"Actionable Advice", 0.3, 0.5, QueryKind::Single},
      {"Exploratory Analysis", 0.7, 1.0, QueryKind::Single},
      {"Metric Relationships", 0.4, 0.6, QueryKind::Multiple},
      {"Contextual Queries", 0.5, 0.7, QueryKind::Multiple},
  };
  return table;
}

std::vector<std::optional<int>> default_windows() {
  return {1, 7, 14, 30, std::nullopt};
}

namespace {

std::string window_tag(const std::optional<int>& w) {
  return w ? std::to_string(*w) : "all";
}

// Window size in days for abnormality: "all" reaches back to the series start.
int resolved_window(const MetricSeries& series, Date t, const std::optional<int>& w) {
  if (w) return *w;
  if (series.rows.empty()) return 1;
  return std::max(t - series.rows.front().date + 1, 1);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  double pos = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

// Empirical zeta distribution of one (metric, window); tercile cuts are
// undefined below 3 feasible timestamps, where everything counts as low.
struct ZetaDistribution {
  std::vector<std::pair<Date, double>> feasible;  // (t, normalized zeta)
  double q33 = 0.0;
  double q66 = 0.0;

  AnomalyLevel level_of(double z) const {
    if (feasible.size() < 3) return AnomalyLevel::Low;
    if (z <= q33) return AnomalyLevel::Low;
    if (z <= q66) return AnomalyLevel::Medium;
    return AnomalyLevel::High;
  }
};

ZetaDistribution zeta_distribution(const MetricSeries& series,
                                   const std::optional<int>& window) {
  ZetaDistribution dist;
  for (const auto& r : series.rows) {
    AbnormalityScore score =
        abnormality(series, r.date, resolved_window(series, r.date, window));
    if (score.valid) dist.feasible.emplace_back(r.date, score.normalized);
  }
  std::vector<double> zetas;
  for (const auto& [_, z] : dist.feasible) zetas.push_back(z);
  std::sort(zetas.begin(), zetas.end());
  dist.q33 = quantile_sorted(zetas, 1.0 / 3.0);
  dist.q66 = quantile_sorted(zetas, 2.0 / 3.0);
  return dist;
}

}  // namespace

std::vector<QueryInputTuple> sample_single_metric_inputs(
    const SubjectData& subject, const std::vector<std::optional<int>>& windows,
    std::uint64_t seed) {
  if (subject.series.empty())
    throw ArgumentError("sample_single_metric_inputs: subject has no metrics");

  std::vector<QueryInputTuple> out;
  for (const auto& [metric, series] : subject.series) {
    if (series.kind == ValueKind::Textual) {
      std::vector<Date> valid;
      for (const auto& r : series.rows)
        if (r.present) valid.push_back(r.date);
      if (valid.empty()) continue;
      std::mt19937_64 rng(mix_seed(seed, "textual/" + metric));
      std::uniform_int_distribution<size_t> pick_t(0, valid.size() - 1);
      std::uniform_int_distribution<size_t> pick_w(0, default_windows().size() - 1);
      QueryInputTuple tuple;
      tuple.kind = QueryKind::Single;
      tuple.metrics = {metric};
      tuple.timestamp = valid[pick_t(rng)];
      tuple.window = default_windows()[pick_w(rng)];
      tuple.anomaly_levels = {AnomalyLevel::NA};
      tuple.zetas = {std::nullopt};
      out.push_back(std::move(tuple));
      continue;
    }

    for (const auto& window : windows) {
      std::mt19937_64 rng(mix_seed(seed, metric + "/" + window_tag(window)));

      ZetaDistribution dist = zeta_distribution(series, window);
      if (dist.feasible.empty()) continue;

      for (AnomalyLevel level : {AnomalyLevel::Low, AnomalyLevel::Medium, AnomalyLevel::High}) {
        std::vector<std::pair<Date, double>> bucket;
        for (const auto& f : dist.feasible)
          if (dist.level_of(f.second) == level) bucket.push_back(f);
        if (bucket.empty()) continue;
        std::uniform_int_distribution<size_t> pick(0, bucket.size() - 1);
        const auto& [t, z] = bucket[pick(rng)];
        QueryInputTuple tuple;
        tuple.kind = QueryKind::Single;
        tuple.metrics = {metric};
        tuple.timestamp = t;
        tuple.window = window;
        tuple.anomaly_levels = {level};
        tuple.zetas = {z};
        out.push_back(std::move(tuple));
      }

      std::vector<Date> missing;
      for (const auto& r : series.rows)
        if (!r.present) missing.push_back(r.date);
      if (!missing.empty()) {
        std::uniform_int_distribution<size_t> pick(0, missing.size() - 1);
        Date t = missing[pick(rng)];
        AbnormalityScore score =
            abnormality(series, t, resolved_window(series, t, window));
        QueryInputTuple tuple;
        tuple.kind = QueryKind::Single;
        tuple.metrics = {metric};
        tuple.timestamp = t;
        tuple.window = window;
        tuple.anomaly_levels = {AnomalyLevel::Missing};
        tuple.zetas = {score.valid ? std::optional<double>(score.normalized) : std::nullopt};
        out.push_back(std::move(tuple));
      }
    }
  }
  return out;
}

MultiSampleResult sample_multi_metric_inputs(const SubjectData& subject, int count,
                                             std::uint64_t seed) {
  MultiSampleResult result;
  std::vector<const std::string*> numeric;
  for (const auto& [name, s] : subject.series)
    if (s.kind == ValueKind::Numeric) numeric.push_back(&name);
  if (numeric.size() < 2) {
    result.insufficient = true;
    return result;
  }

  std::mt19937_64 rng(mix_seed(seed, "multi"));
  const auto windows = default_windows();
  const int max_size = numeric.size() >= 3 ? 3 : 2;
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      std::uniform_int_distribution<int> pick_size(2, max_size);
      const int size = pick_size(rng);

      std::vector<size_t> indices(numeric.size());
      std::iota(indices.begin(), indices.end(), size_t{0});
      std::shuffle(indices.begin(), indices.end(), rng);
      indices.resize(static_cast<size_t>(size));
      std::sort(indices.begin(), indices.end());

      // Timestamps where every selected metric has a present value.
      std::map<Date, int> present_count;
      for (size_t idx : indices) {
        for (const auto& r : subject.series.at(*numeric[idx]).rows)
          if (r.present) ++present_count[r.date];
      }
      std::vector<Date> common;
      for (const auto& [d, c] : present_count)
        if (c == size) common.push_back(d);
      if (common.empty()) continue;

      std::uniform_int_distribution<size_t> pick_t(0, common.size() - 1);
      std::uniform_int_distribution<size_t> pick_w(0, windows.size() - 1);
      QueryInputTuple tuple;
      tuple.kind = QueryKind::Multiple;
      tuple.timestamp = common[pick_t(rng)];
      tuple.window = windows[pick_w(rng)];
      for (size_t idx : indices) {
        const std::string& metric = *numeric[idx];
        const MetricSeries& series = subject.series.at(metric);
        tuple.metrics.push_back(metric);
        AbnormalityScore score = abnormality(
            series, tuple.timestamp, resolved_window(series, tuple.timestamp, tuple.window));
        if (score.valid) {
          tuple.anomaly_levels.push_back(
              zeta_distribution(series, tuple.window).level_of(score.normalized));
          tuple.zetas.push_back(score.normalized);
        } else {
          tuple.anomaly_levels.push_back(AnomalyLevel::NA);
          tuple.zetas.push_back(std::nullopt);
        }
      }
      result.tuples.push_back(std::move(tuple));
      break;
    }
  }
  return result;
}

double assign_openness(const std::string& category_name, std::uint64_t seed) {
  for (const auto& cat : query_categories()) {
    if (cat.name == category_name) {
      std::mt19937_64 rng(mix_seed(seed, "openness/" + category_name));
      std::uniform_real_distribution<double> dist(cat.openness_lo, cat.openness_hi);
      return dist(rng);
    }
  }
  throw ArgumentError("unknown query category: '" + category_name + "'");
}

std::string stub_question(const QueryInputTuple& tuple, const QueryCategory& category) {
  std::string span = tuple.window ? (*tuple.window == 1 ? std::string("today")
                                                        : "the past " + std::to_string(*tuple.window) +
                                                              " days")
                                  : std::string("overall");
  if (tuple.kind == QueryKind::Multiple && tuple.metrics.size() >= 2) {
    return "How does my " + tuple.metrics[0] + " relate to " + tuple.metrics[1] +
           (tuple.metrics.size() > 2 ? " and " + tuple.metrics[2] : "") + " over " + span + "?";
  }
  const std::string& m = tuple.metrics.at(0);
  if (category.name == "Data Retrieval") return "What was my " + m + " over " + span + "?";
  if (category.name == "General Knowledge") return "What is " + m + "?";
  if (category.name == "Anomaly Detection")
    return "Were there unusual deviations in my " + m + " over " + span + "?";
  if (category.name == "Actionable Advice") return "How to improve my " + m + "?";
  if (category.name == "Comparative Insight")
    return "How does my " + m + " over " + span + " compare to before?";
  if (category.name == "Exploratory Analysis")
    return "Why did my " + m + " change over " + span + "?";
  return "What trends are in my " + m + " over " + span + "?";
}

ParsedQuery tuple_to_query(const QueryInputTuple& tuple, std::uint64_t seed) {
  std::vector<const QueryCategory*> matching;
  for (const auto& cat : query_categories())
    if (cat.kind == tuple.kind) matching.push_back(&cat);

  std::mt19937_64 rng(mix_seed(seed, "category"));
  std::uniform_int_distribution<size_t> pick(0, matching.size() - 1);
  const QueryCategory& cat = *matching[pick(rng)];

  ParsedQuery q;
  q.metrics = tuple.metrics;
  q.window_days = tuple.window;
  q.reference_time = tuple.timestamp;
  q.openness = assign_openness(cat.name, seed);
  return q;
}

std::map<std::string, MethodSummary> aggregate_rankings(
    const std::vector<RankRecord>& records) {
  if (records.empty()) throw ArgumentError("aggregate_rankings: no records");

  std::set<std::string> methods;
  for (const auto& [m, _] : records.front().ranks) methods.insert(m);
  const int n = static_cast<int>(methods.size());
  if (n == 0) throw ValidationError("aggregate_rankings: record '" +
                                    records.front().query_id + "' has no ranks");

  std::map<std::string, MethodSummary> out;
  for (const auto& record : records) {
    std::set<std::string> record_methods;
    std::set<int> seen_ranks;
    for (const auto& [method, rank] : record.ranks) {
      record_methods.insert(method);
      if (rank < 1 || rank > n)
        throw ValidationError("aggregate_rankings: record '" + record.query_id +
                              "' has rank " + std::to_string(rank) + " outside 1.." +
                              std::to_string(n));
      if (!seen_ranks.insert(rank).second)
        throw ValidationError("aggregate_rankings: record '" + record.query_id +
                              "' assigns rank " + std::to_string(rank) + " twice");
    }
    if (record_methods != methods)
      throw ValidationError("aggregate_rankings: record '" + record.query_id +
                            "' covers a different method set");
    for (const auto& [method, rank] : record.ranks) {
      out[method].mean_rank += rank;
      if (rank == 1) out[method].win_rate += 1.0;
    }
  }
  for (auto& [_, summary] : out) {
    summary.mean_rank /= static_cast<double>(records.size());
    summary.win_rate /= static_cast<double>(records.size());
  }
  return out;
}

std::string tuple_to_json_line(const QueryInputTuple& tuple) {
  nlohmann::ordered_json j;
  j["kind"] = tuple.kind == QueryKind::Single ? "single" : "multiple";
  j["metrics"] = tuple.metrics;
  j["timestamp"] = to_string(tuple.timestamp);
  if (tuple.window)
    j["window"] = *tuple.window;
  else
    j["window"] = "all";
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (AnomalyLevel l : tuple.anomaly_levels) levels.push_back(to_string(l));
  j["anomaly_level"] = std::move(levels);
  nlohmann::ordered_json zetas = nlohmann::ordered_json::array();
  for (const auto& z : tuple.zetas)
    zetas.push_back(z ? nlohmann::ordered_json(*z) : nlohmann::ordered_json(nullptr));
  j["zeta"] = std::move(zetas);
  return j.dump();
}

QueryInputTuple tuple_from_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("tuple line is not valid JSON: ") + e.what());
  }
  QueryInputTuple tuple;
  try {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "single")
      tuple.kind = QueryKind::Single;
    else if (kind == "multiple")
      tuple.kind = QueryKind::Multiple;
    else
      throw SchemaError("tuple kind must be 'single' or 'multiple'");
    tuple.metrics = j.at("metrics").get<std::vector<std::string>>();
    tuple.timestamp = date_from_string(j.at("timestamp").get<std::string>());
    const auto& w = j.at("window");
    if (w.is_string() && w.get<std::string>() == "all")
      tuple.window = std::nullopt;
    else
      tuple.window = w.get<int>();
    for (const auto& l : j.at("anomaly_level"))
      tuple.anomaly_levels.push_back(anomaly_level_from_string(l.get<std::string>()));
    for (const auto& z : j.at("zeta"))
      tuple.zetas.push_back(z.is_null() ? std::nullopt : std::optional<double>(z.get<double>()));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed tuple line: ") + e.what());
  }
  return tuple;
}

RankRecord rank_record_from_json_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("rank record is not valid JSON: ") + e.what());
  }
  RankRecord record;
  try {
    record.query_id = j.at("query_id").is_string()
                          ? j.at("query_id").get<std::string>()
                          : j.at("query_id").dump();
    for (const auto& [method, rank] : j.at("ranks").items())
      record.ranks[method] = rank.get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed rank record: ") + e.what());
  }
  return record;
}

}  // namespace wag
