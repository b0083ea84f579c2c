#include "wag/local.hpp"

#include <cmath>

#include "wag/stats.hpp"

namespace wag {

AbnormalityScore abnormality(const MetricSeries& series, Date t, int k) {
  if (series.kind != ValueKind::Numeric)
    throw ArgumentError("abnormality: series is not numeric");
  if (k < 1) throw ArgumentError("abnormality: window must be >= 1 day");

  double mean = 0.0;
  int n = 0;
  for (const auto& r : series.rows) {
    if (!r.present) continue;
    mean += r.value;
    ++n;
  }
  AbnormalityScore score;
  if (n == 0) return score;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto& r : series.rows) {
    if (!r.present) continue;
    ss += (r.value - mean) * (r.value - mean);
  }
  double sd = n >= 2 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;

  const Date lo = t - (k - 1);
  double sum_abs_z = 0.0;
  for (const auto& r : series.rows) {
    if (r.date < lo || t < r.date || !r.present) continue;
    if (sd > 0.0) sum_abs_z += std::abs((r.value - mean) / sd);
    ++score.observed_count;
  }
  if (score.observed_count == 0) return score;
  score.raw = sum_abs_z / static_cast<double>(score.observed_count);
  score.normalized = std::min(score.raw / 3.0, 1.0);
  score.valid = true;
  return score;
}

double short_term_weight(double zeta, double eta) {
  if (!(zeta >= 0.0 && zeta <= 1.0))
    throw ArgumentError("short_term_weight: zeta outside [0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw ArgumentError("short_term_weight: eta outside [0, 1]");
  return (2.0 * eta - 1.0) * zeta + (1.0 - eta);
}

double local_weight(double w_short, double gamma_local) {
  if (!(w_short >= 0.0 && w_short <= 1.0))
    throw ArgumentError("local_weight: w_short outside [0, 1]");
  return stats::squash(2.0 * w_short - 1.0, gamma_local);
}

std::map<std::string, LocalWeight> local_weights_for_node(
    const SubjectData& subject, const std::vector<Neighbor>& neighbors, Date t, int k,
    double eta, double gamma_local) {
  std::map<std::string, LocalWeight> out;
  for (const Neighbor& nb : neighbors) {
    LocalWeight lw;
    const std::string key = nb.node->data_source && !nb.node->data_source->feature.empty()
                                ? nb.node->data_source->feature
                                : nb.node->name;
    const MetricSeries* series = subject.find_series(key);
    if (series && series->kind == ValueKind::Numeric) {
      AbnormalityScore score = abnormality(*series, t, k);
      if (score.valid) {
        lw.zeta = score.normalized;
        lw.valid = true;
      }
    }
    lw.w_local = local_weight(short_term_weight(lw.zeta, eta), gamma_local);
    out.emplace(nb.node->id, lw);
  }
  return out;
}

}  // namespace wag
