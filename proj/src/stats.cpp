#include "wag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wag/error.hpp"

namespace wag::stats {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j (0-based) share the mean 1-based rank
    double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Textbook Pearson; returns false when either side is constant.
bool pearson(const std::vector<double>& x, const std::vector<double>& y, double& out) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return false;
  out = sxy / std::sqrt(sxx * syy);
  out = std::clamp(out, -1.0, 1.0);
  return true;
}

}  // namespace

CorrelationEstimate spearman(const std::vector<std::pair<double, double>>& pairs,
                             int min_samples) {
  CorrelationEstimate est;
  est.n = static_cast<int>(pairs.size());
  if (est.n < min_samples || est.n < 2) return est;

  std::vector<double> xs(pairs.size()), ys(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) {
    xs[i] = pairs[i].first;
    ys[i] = pairs[i].second;
  }
  std::vector<double> rx = average_ranks(xs);
  std::vector<double> ry = average_ranks(ys);
  double r = 0.0;
  if (!pearson(rx, ry, r)) return est;
  est.r = r;
  est.valid = true;
  return est;
}

double fisher_z(double r) {
  if (!std::isfinite(r)) throw ArgumentError("fisher_z: non-finite input");
  double c = std::clamp(r, -(1.0 - kFisherClamp), 1.0 - kFisherClamp);
  return std::atanh(c);
}

double inv_fisher_z(double z) {
  if (!std::isfinite(z)) throw ArgumentError("inv_fisher_z: non-finite input");
  return std::tanh(z);
}

double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw ArgumentError("kendall_tau: item sets differ in size");
  const size_t n = a.size();
  if (n < 2) throw ArgumentError("kendall_tau: need at least 2 items");

  long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double dx = a[i] - a[j];
      double dy = b[i] - b[j];
      if (dx == 0.0) ++ties_a;
      if (dy == 0.0) ++ties_b;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0))
        ++concordant;
      else
        ++discordant;
    }
  }
  long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
  double denom =
      std::sqrt(static_cast<double>(n0 - ties_a) * static_cast<double>(n0 - ties_b));
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(concordant - discordant) / denom;
}

double mutual_information(const std::vector<double>& x, const std::vector<double>& y,
                          int bins) {
  if (x.size() != y.size())
    throw ArgumentError("mutual_information: length mismatch");
  if (x.size() < 2) throw ArgumentError("mutual_information: need at least 2 samples");
  if (bins < 2) throw ArgumentError("mutual_information: bins must be >= 2");

  const size_t n = x.size();
  auto bin_of = [bins](double v, double lo, double hi) {
    if (hi == lo) return 0;
    int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    return std::clamp(b, 0, bins - 1);
  };
  auto [xlo_it, xhi_it] = std::minmax_element(x.begin(), x.end());
  auto [ylo_it, yhi_it] = std::minmax_element(y.begin(), y.end());
  double xlo = *xlo_it, xhi = *xhi_it, ylo = *ylo_it, yhi = *yhi_it;

  std::vector<double> joint(static_cast<size_t>(bins) * bins, 0.0);
  std::vector<double> px(bins, 0.0), py(bins, 0.0);
  for (size_t i = 0; i < n; ++i) {
    int bx = bin_of(x[i], xlo, xhi);
    int by = bin_of(y[i], ylo, yhi);
    joint[static_cast<size_t>(bx) * bins + by] += 1.0;
    px[bx] += 1.0;
    py[by] += 1.0;
  }
  double inv_n = 1.0 / static_cast<double>(n);
  double mi = 0.0;
  for (int bx = 0; bx < bins; ++bx) {
    for (int by = 0; by < bins; ++by) {
      double c = joint[static_cast<size_t>(bx) * bins + by];
      if (c == 0.0) continue;
      double pxy = c * inv_n;
      mi += pxy * std::log(pxy / (px[bx] * inv_n * py[by] * inv_n));
    }
  }
  return std::max(mi, 0.0);
}

double squash(double z, double gamma) {
  if (!std::isfinite(z)) throw ArgumentError("squash: non-finite input");
  if (!(gamma > 0.0)) throw ArgumentError("squash: gamma must be positive");
  return 1.0 / (1.0 + std::exp(-gamma * z));
}

double logit(double p) {
  if (!std::isfinite(p)) throw ArgumentError("logit: non-finite input");
  double c = std::clamp(p, kFisherClamp, 1.0 - kFisherClamp);
  return std::log(c / (1.0 - c));
}

}  // namespace wag::stats
