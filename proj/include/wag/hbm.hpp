#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wag/graph.hpp"
#include "wag/subject.hpp"

namespace wag {

// Diagonal Gaussian over a primary node's neighborhood, on the Fisher-z scale.
struct GaussianBelief {
  Eigen::ArrayXd mean;
  Eigen::ArrayXd var;  // strictly positive
};

// Per-neighbor correlation evidence on the z-scale. Entries with
// valid = false contribute nothing to the posterior.
struct HbmObservation {
  Eigen::ArrayXd value;   // fisher_z(|r|)
  Eigen::ArrayXd var;     // 1 / (n - 3)
  std::vector<bool> valid;
  std::vector<int> n;     // paired-sample counts
  std::vector<double> r;  // |spearman|, meaningful where valid

  Eigen::Index size() const { return value.size(); }
};

struct HbmConfig {
  double alpha_pop = 1.0;
  double alpha_ind = 1.0;
  int min_samples = 10;
  double gamma_global = 0.9;
};

// Prior variance on the z-scale for neighbors whose population evidence is
// absent (Sigma_prior = V_pop is undefined there).
inline constexpr double kDefaultPriorVar = 1.0;

enum class FallbackPath { Individual, Population, Prior };

const char* to_string(FallbackPath p);

// Per-neighbor ledger of every quantity entering the global weight.
struct NeighborWeight {
  std::string node_id;
  std::string name;
  double w_prior = 0.0;
  double z_prior = 0.0;
  std::optional<double> r_pop;
  int n_pop = 0;
  std::optional<double> r_ind;
  int n_ind = 0;
  double mu_pop = 0.0;
  double var_pop = 0.0;
  double mu_ind = 0.0;
  double var_ind = 0.0;
  double w_global = 0.0;
  FallbackPath path = FallbackPath::Prior;
};

struct EdgeWeightBundle {
  std::string primary_id;
  std::vector<NeighborWeight> neighbors;  // ordered as neighborhood()
};

// Prior mean placed so that squash(gamma_global * mean) equals the stored
// edge weight exactly when no data update occurs.
GaussianBelief prior_belief(const KnowledgeGraph& graph, const std::string& x,
                            const std::vector<std::string>& neighbor_ids,
                            double gamma_global, const Eigen::ArrayXd& prior_var);

// Pairwise-complete numeric observations for one (x, y) metric pair.
struct PairedSeries {
  std::vector<std::pair<double, double>> obs;
  bool numeric = false;  // both sides numeric
};

PairedSeries paired_observations(const SubjectData& subject, const Node& x, const Node& y);
// Concatenates per-subject paired observations across the cohort.
PairedSeries pooled_observations(const std::vector<SubjectData>& cohort, const Node& x,
                                 const Node& y);

// |spearman| on the z-scale with sampling variance 1/(n-3). Invalid when
// non-numeric, n < min_samples, n <= 3, or either side constant.
HbmObservation empirical_relationships(const std::vector<PairedSeries>& per_neighbor,
                                       int min_samples);

// Two-stage conjugate update. Evidence enters with effective variance
// V / alpha; invalid entries leave the belief unchanged at that stage.
// Returns (population-informed belief, individual-informed belief).
std::pair<GaussianBelief, GaussianBelief> hbm_posterior(const GaussianBelief& prior,
                                                        const HbmObservation& pop,
                                                        const HbmObservation& ind,
                                                        const HbmConfig& cfg);

// Full ladder for one primary node: prior -> population -> individual, with
// the sequential fallback per neighbor.
EdgeWeightBundle global_weights_for_node(const KnowledgeGraph& graph,
                                         const std::vector<SubjectData>& cohort,
                                         const SubjectData& subject, const std::string& x,
                                         const HbmConfig& cfg);

}  // namespace wag
