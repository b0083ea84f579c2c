#include "wag/subject.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "wag/stats.hpp"
#include "wag/text.hpp"

namespace wag {

const MetricSeries* SubjectData::find_series(std::string_view metric) const {
  auto it = series.find(std::string(metric));
  if (it != series.end()) return &it->second;
  std::string norm = normalize_name(metric);
  for (const auto& [name, s] : series) {
    if (normalize_name(name) == norm) return &s;
  }
  return nullptr;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size() && end != begin && std::isfinite(out);
}

}  // namespace

SubjectData subject_from_csv(std::istream& in, std::string subject_id) {
  std::string header;
  if (!std::getline(in, header)) throw SchemaError("empty CSV: no header row");
  std::vector<std::string> columns = split_csv_line(header);
  if (columns.empty() || trim(columns[0]) != "date")
    throw SchemaError("CSV header must start with 'date'");
  for (auto& c : columns) c = trim(c);
  if (columns.size() < 2) throw SchemaError("CSV has no metric columns");

  struct RawRow {
    Date date;
    std::vector<std::string> cells;
  };
  std::vector<RawRow> rows;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    fields.resize(columns.size());
    RawRow row;
    try {
      row.date = date_from_string(trim(fields[0]));
    } catch (const ArgumentError& e) {
      throw SchemaError("row " + std::to_string(line_no) + ": " + e.what());
    }
    row.cells.assign(fields.begin() + 1, fields.end());
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(),
            [](const RawRow& a, const RawRow& b) { return a.date < b.date; });
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].date == rows[i - 1].date)
      throw SchemaError("duplicate date " + to_string(rows[i].date));
  }

  SubjectData subject;
  subject.subject_id = std::move(subject_id);
  for (size_t c = 1; c < columns.size(); ++c) {
    MetricSeries s;
    bool all_numeric = true;
    for (const auto& row : rows) {
      const std::string cell = trim(row.cells[c - 1]);
      double v;
      if (!cell.empty() && !parse_number(cell, v)) all_numeric = false;
    }
    s.kind = all_numeric ? ValueKind::Numeric : ValueKind::Textual;
    for (const auto& row : rows) {
      SeriesRow r;
      r.date = row.date;
      const std::string cell = trim(row.cells[c - 1]);
      if (!cell.empty()) {
        r.present = true;
        if (s.kind == ValueKind::Numeric) {
          parse_number(cell, r.value);
        } else {
          r.text = cell;
        }
      }
      s.rows.push_back(std::move(r));
    }
    subject.series.emplace(columns[c], std::move(s));
  }
  return subject;
}

SubjectData load_subject_csv(const std::filesystem::path& source, std::string subject_id) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw IoError("cannot open CSV: " + source.string());
  return subject_from_csv(in, std::move(subject_id));
}

std::vector<SubjectData> load_cohort(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SubjectData> cohort;
  cohort.reserve(files.size());
  for (const auto& f : files) cohort.push_back(load_subject_csv(f, f.stem().string()));
  return cohort;
}

double missing_rate(const SubjectData& subject) {
  if (subject.series.empty()) throw ArgumentError("missing_rate: subject has no metrics");
  double total = 0.0;
  int metrics = 0;
  for (const auto& [_, s] : subject.series) {
    if (s.rows.empty()) throw ArgumentError("missing_rate: metric has no dated rows");
    int missing = 0;
    for (const auto& r : s.rows)
      if (!r.present) ++missing;
    total += static_cast<double>(missing) / static_cast<double>(s.rows.size());
    ++metrics;
  }
  return total / static_cast<double>(metrics);
}

int valid_period(const SubjectData& subject) {
  bool any = false;
  Date lo{0}, hi{0};
  for (const auto& [_, s] : subject.series) {
    for (const auto& r : s.rows) {
      if (!any) {
        lo = hi = r.date;
        any = true;
      } else {
        lo = std::min(lo, r.date);
        hi = std::max(hi, r.date);
      }
    }
  }
  if (!any) throw ArgumentError("valid_period: subject has no dated rows");
  return hi - lo;
}

VariabilityResult variability(const SubjectData& subject) {
  VariabilityResult out;
  bool any_eligible = false;
  for (const auto& [_, s] : subject.series) {
    if (s.kind != ValueKind::Numeric) continue;
    std::vector<double> values;
    for (const auto& r : s.rows)
      if (r.present) values.push_back(r.value);
    if (values.size() < 2) continue;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (std::abs(mean) < 1e-12) continue;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    out.cv += sd / mean;
    any_eligible = true;
  }
  out.no_eligible_metrics = !any_eligible;
  return out;
}

double pairwise_mi(const SubjectData& subject, int bins, int min_samples) {
  if (bins < 2) throw ArgumentError("pairwise_mi: bins must be >= 2");
  std::vector<const MetricSeries*> numeric;
  for (const auto& [_, s] : subject.series)
    if (s.kind == ValueKind::Numeric) numeric.push_back(&s);

  double total = 0.0;
  for (size_t i = 0; i < numeric.size(); ++i) {
    for (size_t j = i + 1; j < numeric.size(); ++j) {
      // pairwise-complete rows, matched by date
      std::vector<double> xs, ys;
      const auto& ra = numeric[i]->rows;
      const auto& rb = numeric[j]->rows;
      size_t a = 0, b = 0;
      while (a < ra.size() && b < rb.size()) {
        if (ra[a].date < rb[b].date) {
          ++a;
        } else if (rb[b].date < ra[a].date) {
          ++b;
        } else {
          if (ra[a].present && rb[b].present) {
            xs.push_back(ra[a].value);
            ys.push_back(rb[b].value);
          }
          ++a;
          ++b;
        }
      }
      if (static_cast<int>(xs.size()) < std::max(min_samples, 2)) continue;
      total += stats::mutual_information(xs, ys, bins);
    }
  }
  return total;
}

SelectionResult select_participants(const std::vector<SubjectData>& cohort, int n,
                                    std::uint64_t seed,
                                    const SelectionThresholds& thresholds) {
  if (n < 1) throw ArgumentError("select_participants: n must be >= 1");

  struct Candidate {
    std::string id;
    double cv;
  };
  std::vector<Candidate> eligible;
  for (const auto& subject : cohort) {
    if (subject.series.empty()) continue;
    if (missing_rate(subject) > thresholds.max_missing) continue;
    if (valid_period(subject) < thresholds.min_valid_days) continue;
    eligible.push_back({subject.subject_id, variability(subject).cv});
  }
  std::sort(eligible.begin(), eligible.end(), [](const Candidate& a, const Candidate& b) {
    if (a.cv != b.cv) return a.cv < b.cv;
    return a.id < b.id;
  });

  SelectionResult result;
  if (eligible.empty()) {
    result.shortfall = n > 0;
    return result;
  }

  // Contiguous deciles over the CV ordering.
  const size_t m = eligible.size();
  std::vector<std::vector<size_t>> deciles(10);
  for (size_t i = 0; i < m; ++i) deciles[i * 10 / m].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<bool> taken(m, false);
  size_t picked = 0;
  while (picked < static_cast<size_t>(n) && picked < m) {
    for (auto& decile : deciles) {
      if (picked >= static_cast<size_t>(n)) break;
      std::vector<size_t> open;
      for (size_t idx : decile)
        if (!taken[idx]) open.push_back(idx);
      if (open.empty()) continue;
      std::uniform_int_distribution<size_t> pick(0, open.size() - 1);
      size_t chosen = open[pick(rng)];
      taken[chosen] = true;
      result.ids.push_back(eligible[chosen].id);
      ++picked;
    }
  }
  result.shortfall = picked < static_cast<size_t>(n);
  return result;
}

SelectionStats selection_stats(const SubjectData& subject, int bins) {
  SelectionStats s;
  s.md = missing_rate(subject);
  s.vl = valid_period(subject);
  VariabilityResult v = variability(subject);
  s.cv = v.cv;
  s.cv_no_eligible = v.no_eligible_metrics;
  s.mi = pairwise_mi(subject, bins);
  return s;
}

}  // namespace wag
