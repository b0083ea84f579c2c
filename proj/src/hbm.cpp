#include "wag/hbm.hpp"

#include <cmath>

#include "wag/stats.hpp"

namespace wag {

const char* to_string(FallbackPath p) {
  switch (p) {
    case FallbackPath::Individual: return "individual";
    case FallbackPath::Population: return "population";
    case FallbackPath::Prior: return "prior";
  }
  return "prior";
}

GaussianBelief prior_belief(const KnowledgeGraph& graph, const std::string& x,
                            const std::vector<std::string>& neighbor_ids,
                            double gamma_global, const Eigen::ArrayXd& prior_var) {
  if (!(gamma_global > 0.0)) throw ArgumentError("prior_belief: gamma_global must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(neighbor_ids.size());
  if (prior_var.size() != n)
    throw ArgumentError("prior_belief: prior_var size does not match neighbor count");
  if ((prior_var <= 0.0).any())
    throw ArgumentError("prior_belief: prior variances must be positive");

  GaussianBelief belief;
  belief.mean.resize(n);
  belief.var = prior_var;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto it = graph.edges.find(EdgeKey(x, neighbor_ids[static_cast<size_t>(i)]));
    if (it == graph.edges.end())
      throw Error("prior_belief: no edge between '" + x + "' and '" +
                  neighbor_ids[static_cast<size_t>(i)] + "'");
    belief.mean(i) = stats::logit(it->second.prior_weight) / gamma_global;
  }
  return belief;
}

PairedSeries paired_observations(const SubjectData& subject, const Node& x, const Node& y) {
  auto key = [](const Node& n) {
    return n.data_source && !n.data_source->feature.empty() ? n.data_source->feature : n.name;
  };
  PairedSeries out;
  const MetricSeries* sx = subject.find_series(key(x));
  const MetricSeries* sy = subject.find_series(key(y));
  if (!sx || !sy) return out;
  if (sx->kind != ValueKind::Numeric || sy->kind != ValueKind::Numeric) return out;
  out.numeric = true;
  size_t a = 0, b = 0;
  while (a < sx->rows.size() && b < sy->rows.size()) {
    if (sx->rows[a].date < sy->rows[b].date) {
      ++a;
    } else if (sy->rows[b].date < sx->rows[a].date) {
      ++b;
    } else {
      if (sx->rows[a].present && sy->rows[b].present)
        out.obs.emplace_back(sx->rows[a].value, sy->rows[b].value);
      ++a;
      ++b;
    }
  }
  return out;
}

PairedSeries pooled_observations(const std::vector<SubjectData>& cohort, const Node& x,
                                 const Node& y) {
  PairedSeries out;
  for (const auto& subject : cohort) {
    PairedSeries one = paired_observations(subject, x, y);
    if (!one.numeric) continue;
    out.numeric = true;
    out.obs.insert(out.obs.end(), one.obs.begin(), one.obs.end());
  }
  return out;
}

HbmObservation empirical_relationships(const std::vector<PairedSeries>& per_neighbor,
                                       int min_samples) {
  const Eigen::Index n = static_cast<Eigen::Index>(per_neighbor.size());
  HbmObservation obs;
  obs.value = Eigen::ArrayXd::Zero(n);
  obs.var = Eigen::ArrayXd::Ones(n);
  obs.valid.assign(per_neighbor.size(), false);
  obs.n.assign(per_neighbor.size(), 0);
  obs.r.assign(per_neighbor.size(), 0.0);

  for (size_t i = 0; i < per_neighbor.size(); ++i) {
    const PairedSeries& ps = per_neighbor[i];
    obs.n[i] = static_cast<int>(ps.obs.size());
    if (!ps.numeric) continue;
    if (obs.n[i] < min_samples || obs.n[i] <= 3) continue;
    stats::CorrelationEstimate est = stats::spearman(ps.obs, min_samples);
    if (!est.valid) continue;
    const Eigen::Index ix = static_cast<Eigen::Index>(i);
    obs.r[i] = std::abs(est.r);
    obs.value(ix) = stats::fisher_z(obs.r[i]);
    obs.var(ix) = 1.0 / static_cast<double>(est.n - 3);
    obs.valid[i] = true;
  }
  return obs;
}

namespace {

// One conjugate stage: posterior precision is the sum of the prior precision
// and the alpha-scaled observation precision.
GaussianBelief stage_update(const GaussianBelief& prior, const HbmObservation& obs,
                            double alpha) {
  if (obs.size() != prior.mean.size())
    throw ArgumentError("hbm_posterior: observation dimension mismatch");
  GaussianBelief post = prior;
  for (Eigen::Index i = 0; i < prior.mean.size(); ++i) {
    if (!obs.valid[static_cast<size_t>(i)]) continue;
    if (!(obs.var(i) > 0.0))
      throw ArgumentError("hbm_posterior: nonpositive observation variance");
    double precision = 1.0 / prior.var(i) + alpha / obs.var(i);
    post.var(i) = 1.0 / precision;
    post.mean(i) = post.var(i) * (prior.mean(i) / prior.var(i) + alpha * obs.value(i) / obs.var(i));
  }
  return post;
}

}  // namespace

std::pair<GaussianBelief, GaussianBelief> hbm_posterior(const GaussianBelief& prior,
                                                        const HbmObservation& pop,
                                                        const HbmObservation& ind,
                                                        const HbmConfig& cfg) {
  if (prior.mean.size() != prior.var.size())
    throw ArgumentError("hbm_posterior: prior mean/var dimension mismatch");
  if ((prior.var <= 0.0).any())
    throw ArgumentError("hbm_posterior: nonpositive prior variance");
  if (!(cfg.alpha_pop > 0.0 && cfg.alpha_ind > 0.0))
    throw ArgumentError("hbm_posterior: alpha must be positive");

  GaussianBelief pop_belief = stage_update(prior, pop, cfg.alpha_pop);
  GaussianBelief ind_belief = stage_update(pop_belief, ind, cfg.alpha_ind);
  return {std::move(pop_belief), std::move(ind_belief)};
}

EdgeWeightBundle global_weights_for_node(const KnowledgeGraph& graph,
                                         const std::vector<SubjectData>& cohort,
                                         const SubjectData& subject, const std::string& x,
                                         const HbmConfig& cfg) {
  const Node& primary = [&]() -> const Node& {
    auto it = graph.nodes.find(x);
    if (it == graph.nodes.end()) throw NotFoundError(x);
    return it->second;
  }();

  std::vector<Neighbor> neighbors = neighborhood(graph, x);
  const size_t n = neighbors.size();

  std::vector<PairedSeries> pop_pairs, ind_pairs;
  pop_pairs.reserve(n);
  ind_pairs.reserve(n);
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const Neighbor& nb : neighbors) {
    ids.push_back(nb.node->id);
    pop_pairs.push_back(pooled_observations(cohort, primary, *nb.node));
    ind_pairs.push_back(paired_observations(subject, primary, *nb.node));
  }
  HbmObservation pop = empirical_relationships(pop_pairs, cfg.min_samples);
  HbmObservation ind = empirical_relationships(ind_pairs, cfg.min_samples);

  Eigen::ArrayXd prior_var(static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i)
    prior_var(static_cast<Eigen::Index>(i)) =
        pop.valid[i] ? pop.var(static_cast<Eigen::Index>(i)) : kDefaultPriorVar;

  GaussianBelief prior = prior_belief(graph, x, ids, cfg.gamma_global, prior_var);
  auto [pop_belief, ind_belief] = hbm_posterior(prior, pop, ind, cfg);

  EdgeWeightBundle bundle;
  bundle.primary_id = x;
  bundle.neighbors.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const Eigen::Index ix = static_cast<Eigen::Index>(i);
    NeighborWeight w;
    w.node_id = neighbors[i].node->id;
    w.name = neighbors[i].node->name;
    w.w_prior = neighbors[i].edge->prior_weight;
    w.z_prior = prior.mean(ix);
    w.n_pop = pop.n[i];
    w.n_ind = ind.n[i];
    if (pop.valid[i]) w.r_pop = pop.r[i];
    if (ind.valid[i]) w.r_ind = ind.r[i];
    w.mu_pop = pop_belief.mean(ix);
    w.var_pop = pop_belief.var(ix);
    w.mu_ind = ind_belief.mean(ix);
    w.var_ind = ind_belief.var(ix);
    if (ind.valid[i]) {
      w.path = FallbackPath::Individual;
      w.w_global = stats::squash(w.mu_ind, cfg.gamma_global);
    } else if (pop.valid[i]) {
      w.path = FallbackPath::Population;
      w.w_global = stats::squash(w.mu_pop, cfg.gamma_global);
    } else {
      w.path = FallbackPath::Prior;
      w.w_global = w.w_prior;  // stored edge weight, verbatim
    }
    bundle.neighbors.push_back(std::move(w));
  }
  return bundle;
}

}  // namespace wag
