#include "wag/calibration.hpp"

#include <cmath>

#include "wag/stats.hpp"

namespace wag {

namespace {

HbmObservation empty_observation(Eigen::Index n) {
  HbmObservation obs;
  obs.value = Eigen::ArrayXd::Zero(n);
  obs.var = Eigen::ArrayXd::Ones(n);
  obs.valid.assign(static_cast<size_t>(n), false);
  obs.n.assign(static_cast<size_t>(n), 0);
  obs.r.assign(static_cast<size_t>(n), 0.0);
  return obs;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw ArgumentError("alpha grid needs at least 2 points");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw ArgumentError("alpha grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw ArgumentError("alpha grid must be strictly increasing");
  }
}

std::vector<double> masked(const Eigen::ArrayXd& v, const std::vector<bool>& mask) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (mask[static_cast<size_t>(i)]) out.push_back(v(i));
  return out;
}

// Evidence for one primary node, computed once and reused across the grid.
struct NodeEvidence {
  GaussianBelief prior;
  HbmObservation pop;
  HbmObservation ind;
};

NodeEvidence node_evidence(const KnowledgeGraph& graph,
                           const std::vector<SubjectData>& cohort,
                           const SubjectData* subject, const std::string& x,
                           const HbmConfig& cfg) {
  const Node& primary = graph.nodes.at(x);
  std::vector<Neighbor> neighbors = neighborhood(graph, x);
  std::vector<PairedSeries> pop_pairs, ind_pairs;
  std::vector<std::string> ids;
  for (const Neighbor& nb : neighbors) {
    ids.push_back(nb.node->id);
    pop_pairs.push_back(pooled_observations(cohort, primary, *nb.node));
    if (subject) ind_pairs.push_back(paired_observations(*subject, primary, *nb.node));
  }
  NodeEvidence ev;
  ev.pop = empirical_relationships(pop_pairs, cfg.min_samples);
  ev.ind = subject ? empirical_relationships(ind_pairs, cfg.min_samples)
                   : empty_observation(ev.pop.size());
  Eigen::ArrayXd prior_var(ev.pop.size());
  for (Eigen::Index i = 0; i < ev.pop.size(); ++i)
    prior_var(i) = ev.pop.valid[static_cast<size_t>(i)] ? ev.pop.var(i) : kDefaultPriorVar;
  ev.prior = prior_belief(graph, x, ids, cfg.gamma_global, prior_var);
  return ev;
}

}  // namespace

CurvePair tau_curves(CalibrationStage stage, const KnowledgeGraph& graph,
                     const std::vector<SubjectData>& cohort,
                     const std::vector<std::string>& subject_sample,
                     const std::vector<double>& alpha_grid, const HbmConfig& cfg) {
  check_grid(alpha_grid);

  // (previous-stage means, observation, posterior means per alpha) per unit.
  std::vector<double> preserve_sum(alpha_grid.size(), 0.0);
  std::vector<double> align_sum(alpha_grid.size(), 0.0);
  std::vector<int> preserve_n(alpha_grid.size(), 0);
  std::vector<int> align_n(alpha_grid.size(), 0);
  bool any_unit = false;

  auto accumulate = [&](const GaussianBelief& prior, const HbmObservation& pop,
                        const HbmObservation& ind) {
    const HbmObservation& evidence = stage == CalibrationStage::Population ? pop : ind;
    size_t valid_count = 0;
    for (bool v : evidence.valid) valid_count += v ? 1 : 0;
    if (valid_count < 2) return;
    any_unit = true;

    // Reference ranking: previous-stage means at the evidence's neighbors.
    GaussianBelief reference = prior;
    if (stage == CalibrationStage::Individual)
      reference = hbm_posterior(prior, pop, empty_observation(prior.mean.size()), cfg).first;

    std::vector<double> ref = masked(reference.mean, evidence.valid);
    std::vector<double> observed = masked(evidence.value, evidence.valid);
    for (size_t gi = 0; gi < alpha_grid.size(); ++gi) {
      HbmConfig stage_cfg = cfg;
      if (stage == CalibrationStage::Population)
        stage_cfg.alpha_pop = alpha_grid[gi];
      else
        stage_cfg.alpha_ind = alpha_grid[gi];

      auto [pop_belief, ind_belief] =
          hbm_posterior(prior, pop,
                        stage == CalibrationStage::Population
                            ? empty_observation(prior.mean.size())
                            : ind,
                        stage_cfg);
      const GaussianBelief& posterior =
          stage == CalibrationStage::Population ? pop_belief : ind_belief;
      std::vector<double> post = masked(posterior.mean, evidence.valid);

      double tp = stats::kendall_tau(ref, post);
      double ta = stats::kendall_tau(observed, post);
      if (std::isfinite(tp)) {
        preserve_sum[gi] += tp;
        ++preserve_n[gi];
      }
      if (std::isfinite(ta)) {
        align_sum[gi] += ta;
        ++align_n[gi];
      }
    }
  };

  if (stage == CalibrationStage::Population) {
    for (const auto& [node_id, _] : graph.nodes) {
      NodeEvidence ev = node_evidence(graph, cohort, nullptr, node_id, cfg);
      accumulate(ev.prior, ev.pop, ev.ind);
    }
  } else {
    for (const auto& sid : subject_sample) {
      const SubjectData* subject = nullptr;
      for (const auto& s : cohort)
        if (s.subject_id == sid) subject = &s;
      if (!subject) throw ArgumentError("tau_curves: unknown subject id '" + sid + "'");
      for (const auto& [node_id, _] : graph.nodes) {
        NodeEvidence ev = node_evidence(graph, cohort, subject, node_id, cfg);
        accumulate(ev.prior, ev.pop, ev.ind);
      }
    }
  }

  if (!any_unit)
    throw InsufficientDataError(
        "tau_curves: no sampled node has 2 or more valid neighbors at this stage");

  CurvePair curves;
  curves.preserve.alphas = alpha_grid;
  curves.align.alphas = alpha_grid;
  curves.preserve.label =
      stage == CalibrationStage::Population ? "tau(mu_prior, mu_pop)" : "tau(mu_pop, mu_ind)";
  curves.align.label =
      stage == CalibrationStage::Population ? "tau(R_pop, mu_pop)" : "tau(R_ind, mu_ind)";
  for (size_t gi = 0; gi < alpha_grid.size(); ++gi) {
    curves.preserve.taus.push_back(preserve_n[gi] ? preserve_sum[gi] / preserve_n[gi] : 0.0);
    curves.align.taus.push_back(align_n[gi] ? align_sum[gi] / align_n[gi] : 0.0);
  }
  return curves;
}

std::optional<double> find_intersection(const TauCurve& preserve, const TauCurve& align) {
  if (preserve.alphas != align.alphas)
    throw ArgumentError("find_intersection: curves computed on different grids");
  if (preserve.alphas.size() < 2 || preserve.taus.size() != preserve.alphas.size() ||
      align.taus.size() != align.alphas.size())
    throw ArgumentError("find_intersection: malformed curves");

  for (size_t i = 0; i < preserve.alphas.size(); ++i) {
    double d = preserve.taus[i] - align.taus[i];
    if (d == 0.0) return preserve.alphas[i];
    if (i == 0) continue;
    double prev = preserve.taus[i - 1] - align.taus[i - 1];
    if ((prev > 0.0) != (d > 0.0)) {
      // Linear root of the difference between the bracketing grid points.
      double a0 = preserve.alphas[i - 1], a1 = preserve.alphas[i];
      return a0 + prev * (a1 - a0) / (prev - d);
    }
  }
  return std::nullopt;
}

CalibrationResult calibrate(const KnowledgeGraph& graph,
                            const std::vector<SubjectData>& cohort,
                            const std::vector<double>& alpha_grid, const HbmConfig& cfg) {
  check_grid(alpha_grid);

  std::vector<std::string> all_subjects;
  for (const auto& s : cohort) all_subjects.push_back(s.subject_id);

  CalibrationResult result;
  result.population =
      tau_curves(CalibrationStage::Population, graph, cohort, all_subjects, alpha_grid, cfg);
  std::optional<double> alpha_pop =
      find_intersection(result.population.preserve, result.population.align);
  if (!alpha_pop)
    throw CalibrationError("calibrate: population-stage curves never cross",
                           result.population);
  result.alpha_pop = *alpha_pop;

  HbmConfig frozen = cfg;
  frozen.alpha_pop = result.alpha_pop;
  result.individual =
      tau_curves(CalibrationStage::Individual, graph, cohort, all_subjects, alpha_grid, frozen);
  std::optional<double> alpha_ind =
      find_intersection(result.individual.preserve, result.individual.align);
  if (!alpha_ind)
    throw CalibrationError("calibrate: individual-stage curves never cross",
                           result.individual);
  result.alpha_ind = *alpha_ind;
  return result;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (points < 2) throw ArgumentError("log_grid: need at least 2 points");
  if (!(lo > 0.0 && hi > lo)) throw ArgumentError("log_grid: need 0 < lo < hi");
  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(points));
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    grid.push_back(std::exp(llo + (lhi - llo) * i / (points - 1)));
  return grid;
}

std::string curves_csv(const CurvePair& population, const CurvePair& individual) {
  std::string csv = "alpha,tau_preserve,tau_align,stage\n";
  auto emit = [&csv](const CurvePair& pair, const char* stage) {
    for (size_t i = 0; i < pair.preserve.alphas.size(); ++i) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%s\n", pair.preserve.alphas[i],
                    pair.preserve.taus[i], pair.align.taus[i], stage);
      csv += buf;
    }
  };
  emit(population, "population");
  emit(individual, "individual");
  return csv;
}

}  // namespace wag
