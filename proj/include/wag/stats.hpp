#pragma once

#include <utility>
#include <vector>

namespace wag::stats {

// |r| = 1 is clamped to 1 - kFisherClamp before arctanh.
inline constexpr double kFisherClamp = 1e-6;

struct CorrelationEstimate {
  double r = 0.0;
  int n = 0;
  bool valid = false;
};

// 1-based average ranks; ties receive the mean of the positions they span.
std::vector<double> average_ranks(const std::vector<double>& values);

// Spearman correlation over pairwise-complete observations (the caller has
// already dropped rows with either side missing). valid requires
// n >= min_samples and both sides non-constant.
CorrelationEstimate spearman(const std::vector<std::pair<double, double>>& pairs,
                             int min_samples);

// z = arctanh(r) with r clamped into [-(1-eps), 1-eps].
double fisher_z(double r);
// r = tanh(z).
double inv_fisher_z(double z);

// Tie-corrected tau_b over two aligned score vectors (position i scores the
// same item in both). Returns NaN when either side is fully tied.
double kendall_tau(const std::vector<double>& a, const std::vector<double>& b);

// Plug-in mutual information in nats from an equal-width joint histogram,
// clamped at 0.
double mutual_information(const std::vector<double>& x, const std::vector<double>& y,
                          int bins);

// 1 / (1 + exp(-gamma * z)). Strictly increasing in z; gamma > 0.
double squash(double z, double gamma);

// ln(p / (1-p)) with p clamped into [kFisherClamp, 1 - kFisherClamp];
// inverse of squash at gamma = 1 away from the clamp points.
double logit(double p);

}  // namespace wag::stats
