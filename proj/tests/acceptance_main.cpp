// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code 0 only when all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support/adversarial.hpp"
#include "support/circadian_fixture.hpp"
#include "support/synthetic.hpp"
#include "wag/calibration.hpp"
#include "wag/local.hpp"
#include "wag/queryset.hpp"
#include "wag/retrieval.hpp"
#include "wag/stats.hpp"
#include "wag/text.hpp"

using namespace wag;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail = "") {
  std::printf("%s  C%02d %s%s%s\n", ok ? "PASS" : "FAIL", id, name,
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GaussianBelief make_prior(const Eigen::ArrayXd& mean, const Eigen::ArrayXd& var) {
  GaussianBelief b;
  b.mean = mean;
  b.var = var;
  return b;
}

HbmObservation make_obs(const Eigen::ArrayXd& value, const Eigen::ArrayXd& var,
                        const std::vector<bool>& valid) {
  HbmObservation obs;
  obs.value = value;
  obs.var = var;
  obs.valid = valid;
  obs.n.assign(valid.size(), 20);
  obs.r.assign(valid.size(), 0.0);
  return obs;
}

// ---- criterion 1 & 2: HBM sequential vs one-shot, and limits -------------

bool hbm_equivalence(double& elapsed) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unif(0.1, 3.0);
  std::normal_distribution<double> norm(0.0, 1.5);
  std::bernoulli_distribution coin(0.8);

  auto t0 = Clock::now();
  bool ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index dim = trial % 2 == 0 ? 1 : 17;
    Eigen::ArrayXd mu0(dim), var0(dim), zp(dim), vp(dim), zi(dim), vi(dim);
    std::vector<bool> valid_p(static_cast<size_t>(dim)), valid_i(static_cast<size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i) {
      mu0(i) = norm(rng);
      var0(i) = unif(rng);
      zp(i) = norm(rng);
      vp(i) = unif(rng);
      zi(i) = norm(rng);
      vi(i) = unif(rng);
      valid_p[static_cast<size_t>(i)] = coin(rng);
      valid_i[static_cast<size_t>(i)] = coin(rng);
    }
    HbmConfig cfg;
    cfg.alpha_pop = unif(rng);
    cfg.alpha_ind = unif(rng);

    auto [pop_belief, ind_belief] =
        hbm_posterior(make_prior(mu0, var0), make_obs(zp, vp, valid_p),
                      make_obs(zi, vi, valid_i), cfg);

    for (Eigen::Index i = 0; i < dim; ++i) {
      double lambda = 1.0 / var0(i);
      double b = mu0(i) / var0(i);
      if (valid_p[static_cast<size_t>(i)]) {
        lambda += cfg.alpha_pop / vp(i);
        b += cfg.alpha_pop * zp(i) / vp(i);
      }
      if (valid_i[static_cast<size_t>(i)]) {
        lambda += cfg.alpha_ind / vi(i);
        b += cfg.alpha_ind * zi(i) / vi(i);
      }
      ok = ok && std::abs(ind_belief.mean(i) - b / lambda) <= 1e-10 &&
           std::abs(ind_belief.var(i) - 1.0 / lambda) <= 1e-10;
    }
    (void)pop_belief;
  }
  elapsed = seconds_since(t0);
  return ok && elapsed < 1.0;
}

bool hbm_limits() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> unif(0.1, 3.0);
  std::normal_distribution<double> norm(0.0, 1.5);

  bool ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::ArrayXd mu0(1), var0(1), zp(1), vp(1), zi(1), vi(1);
    mu0 << norm(rng);
    var0 << unif(rng);
    zp << norm(rng);
    vp << unif(rng);
    zi << norm(rng);
    vi << unif(rng);

    HbmConfig off;
    off.alpha_pop = 1e-12;
    off.alpha_ind = 1e-12;
    auto vanished = hbm_posterior(make_prior(mu0, var0), make_obs(zp, vp, {true}),
                                  make_obs(zi, vi, {true}), off);
    ok = ok && std::abs(vanished.second.mean(0) - mu0(0)) <= 1e-9 &&
         std::abs(vanished.second.var(0) - var0(0)) <= 1e-9;

    HbmConfig strong;
    strong.alpha_pop = 1e6;
    strong.alpha_ind = 1e6;
    auto tracked = hbm_posterior(make_prior(mu0, var0), make_obs(zp, vp, {true}),
                                 make_obs(zi, vi, {false}), strong);
    ok = ok && std::abs(tracked.first.mean(0) - zp(0)) <= 1e-3;
    auto tracked2 = hbm_posterior(make_prior(mu0, var0), make_obs(zp, vp, {false}),
                                  make_obs(zi, vi, {true}), strong);
    ok = ok && std::abs(tracked2.second.mean(0) - zi(0)) <= 1e-3;
  }
  return ok;
}

// ---- criterion 3: rank statistics vs independent oracles -----------------

std::vector<double> oracle_ranks(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    int smaller = 0, equal = 0;
    for (size_t j = 0; j < v.size(); ++j) {
      if (v[j] < v[i]) ++smaller;
      if (j != i && v[j] == v[i]) ++equal;
    }
    out[i] = 1.0 + smaller + equal / 2.0;
  }
  return out;
}

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double oracle_kendall(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  double c = 0, d = 0, ta = 0, tb = 0, pairs = 0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      pairs += 1;
      double sx = a[i] - a[j], sy = b[i] - b[j];
      if (sx == 0 && sy == 0) {
        ta += 1;
        tb += 1;
      } else if (sx == 0) {
        ta += 1;
      } else if (sy == 0) {
        tb += 1;
      } else if (sx * sy > 0) {
        c += 1;
      } else {
        d += 1;
      }
    }
  }
  return (c - d) / std::sqrt((pairs - ta) * (pairs - tb));
}

bool oracle_equivalence(std::string& detail) {
  long long checked = 0;
  for (int n = 2; n <= 6; ++n) {
    std::vector<double> a(static_cast<size_t>(n));
    std::iota(a.begin(), a.end(), 1.0);
    std::vector<double> pa = a;
    do {
      std::vector<double> pb = a;
      do {
        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < n; ++i)
          pairs.emplace_back(pa[static_cast<size_t>(i)], pb[static_cast<size_t>(i)]);
        stats::CorrelationEstimate est = stats::spearman(pairs, 2);
        double expect = oracle_pearson(oracle_ranks(pa), oracle_ranks(pb));
        if (!est.valid || est.r != expect) return false;
        ++checked;
      } while (std::next_permutation(pb.begin(), pb.end()));
    } while (std::next_permutation(pa.begin(), pa.end()));
  }

  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> len(2, 8);
  std::uniform_int_distribution<int> score(0, 5);
  int kendall_checked = 0;
  while (kendall_checked < 500) {
    int n = len(rng);
    std::vector<double> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<size_t>(i)] = score(rng);
      b[static_cast<size_t>(i)] = score(rng);
    }
    auto all_equal = [](const std::vector<double>& v) {
      return std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    };
    if (all_equal(a) || all_equal(b)) continue;
    if (stats::kendall_tau(a, b) != oracle_kendall(a, b)) return false;
    ++kendall_checked;
  }
  detail = std::to_string(checked) + " permutation pairs, 500 kendall vectors";
  return true;
}

// ---- criterion 13 part 2: local model effect direction --------------------

struct EffectScenario {
  KnowledgeGraph graph;
  std::vector<SubjectData> cohort;
};

EffectScenario make_effect_scenario() {
  EffectScenario sc;
  const Date start = Date{18262};

  struct Spec {
    const char* name;
    double prior;
  };
  const Spec specs[] = {{"Focus", 0.0},    {"Spiky", 0.55},  {"Calm one", 0.60},
                        {"Calm two", 0.62}, {"Calm three", 0.64}, {"Calm four", 0.66},
                        {"Calm five", 0.68}};
  for (const Spec& s : specs) {
    Node n;
    n.name = s.name;
    n.id = slugify(s.name);
    n.description = "scenario metric";
    sc.graph.nodes.emplace(n.id, n);
  }
  for (const Spec& s : specs) {
    if (std::string(s.name) == "Focus") continue;
    Edge e;
    e.key = EdgeKey("focus", slugify(s.name));
    e.description = "scenario edge";
    e.prior_weight = s.prior;
    e.provenance = Provenance::Fixture;
    sc.graph.edges.emplace(e.key, e);
  }

  SubjectData subject;
  subject.subject_id = "s0";
  // primary: 5 present days only, so every correlation stays invalid and
  // w_global falls back to the stored prior weights
  std::vector<double> sparse(60, NAN);
  for (int i = 0; i < 5; ++i) sparse[static_cast<size_t>(i)] = 10.0 + i;
  subject.series.emplace("Focus", testing::numeric_series(start, sparse));

  // calm neighbors: last week sits exactly on the alternating-series mean
  std::vector<double> calm;
  for (int i = 0; i < 53; ++i) calm.push_back(i % 2 == 0 ? 9.5 : 10.5);
  for (int i = 0; i < 7; ++i) calm.push_back(10.0);
  for (const char* name : {"Calm one", "Calm two", "Calm three", "Calm four", "Calm five"})
    subject.series.emplace(name, testing::numeric_series(start, calm));

  // anomalous neighbor: identical history, strong final-week spike
  std::vector<double> spiky(calm.begin(), calm.begin() + 53);
  for (int i = 0; i < 7; ++i) spiky.push_back(30.0);
  subject.series.emplace("Spiky", testing::numeric_series(start, spiky));

  sc.cohort.push_back(subject);
  return sc;
}

// ---- criterion 12: deterministic end-to-end pipeline ----------------------

std::string pipeline_digest(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);

  testing::CohortSpec spec;
  spec.seed = 777;
  auto generated = testing::make_cohort(spec);
  for (const auto& s : generated) {
    std::ofstream f(dir / (s.subject_id + ".csv"), std::ios::binary);
    f << testing::to_csv(s);
  }

  std::vector<SubjectData> cohort = load_cohort(dir);
  StubKnowledgeProvider knowledge;
  StubEmbedder embedder;
  KnowledgeGraph graph = init_general_graph(testing::metric_names(cohort), knowledge);

  std::string digest = graph_to_json_string(graph);

  RetrievalConfig cfg;
  int queries = 0;
  for (const auto& subject : cohort) {
    if (queries >= 100) break;
    auto tuples = sample_single_metric_inputs(subject, default_windows(), 777);
    for (const auto& tuple : tuples) {
      if (queries >= 100) break;
      digest += tuple_to_json_line(tuple) + "\n";
      ParsedQuery q = tuple_to_query(tuple, mix_seed(777, "q" + std::to_string(queries)));
      RetrievalResult r = retrieve(graph, cohort, subject, q, cfg, embedder);
      digest += r.to_json_string();
      ++queries;
    }
  }
  if (queries < 100) digest += "short:" + std::to_string(queries);
  return digest;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");

  {
    double elapsed = 0.0;
    bool ok = hbm_equivalence(elapsed);
    char buf[96];
    std::snprintf(buf, sizeof buf, "1000 instances (scalar+17-dim), 1e-10, %.3f s", elapsed);
    report(1, "HBM sequential == one-shot posterior", ok, buf);
  }

  report(2, "limit recovery (alpha -> 0 and alpha -> 1e6)", hbm_limits(),
         "prior to 1e-9, observation to 1e-3");

  {
    std::string detail;
    bool ok = oracle_equivalence(detail);
    report(3, "spearman/kendall match brute-force oracles exactly", ok, detail);
  }

  {
    bool ok = true;
    for (int i = 0; i <= 10000; ++i) {
      double r = (-1.0 + 1e-6) + (2.0 - 2e-6) * i / 10000.0;
      ok = ok && std::abs(stats::inv_fisher_z(stats::fisher_z(r)) - r) <= 1e-12;
    }
    report(4, "fisher z round trip on the 10,001-point grid", ok, "|error| <= 1e-12");
  }

  {
    bool ok = true;
    for (int ei = 0; ei <= 100 && ok; ++ei) {
      for (int zi = 0; zi <= 100 && ok; ++zi) {
        double eta = ei / 100.0, zeta = zi / 100.0;
        double w = short_term_weight(zeta, eta);
        ok = ok && std::abs(w - (eta * zeta + (1 - eta) * (1 - zeta))) <= 1e-15;
        ok = ok && w >= 0.0 && w <= 1.0;
        if (ei == 50) ok = ok && w == 0.5;
      }
    }
    report(5, "openness dial identities on the exhaustive grid", ok,
           "101x101 grid, 1e-15, midpoint row constant");
  }

  {
    bool ok = neighbor_budget(0.8, 5, 1) == std::vector<int>{4};
    for (int k = 1; k <= 8 && ok; ++k) {
      auto budgets = neighbor_budget(0.0, 5, k);
      for (int b : budgets) ok = ok && b == 0;
    }
    report(6, "budget fixture (0.8 x 5 = 4; eta 0 = none)", ok);
  }

  {
    auto run_column = [](const testing::RankedColumn& column) {
      std::vector<ScoredNeighbor> candidates;
      for (const auto& [name, w] : column) {
        ScoredNeighbor sn;
        sn.global.name = name;
        sn.global.node_id = name;
        sn.global.w_global = w;
        sn.w_final = w;
        candidates.push_back(std::move(sn));
      }
      std::set<std::string> selected;
      for (const auto& sn : select_top(candidates, 4)) selected.insert(sn.global.name);
      return selected;
    };
    bool ok = run_column(testing::circadian_prior()) == testing::circadian_prior_top4() &&
              run_column(testing::circadian_pop()) == testing::circadian_pop_top4() &&
              run_column(testing::circadian_subject()) == testing::circadian_subject_top4();
    report(7, "circadian ranking fixtures reproduce highlighted top-4 sets", ok,
           "prior / population / subject columns");
  }

  {
    // one neighbor per rung: valid individual data, population-only, textual
    StubKnowledgeProvider stub;
    KnowledgeGraph g =
        init_general_graph({"Primary", "IndNeighbor", "PopNeighbor", "Lifelog"}, stub);
    const Date start = Date{18262};
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> base;
    for (int i = 0; i < 30; ++i) base.push_back(i + noise(rng));
    auto series = [&](double coupling) {
      std::vector<double> out;
      for (double b : base) out.push_back(coupling * b + noise(rng));
      return out;
    };

    std::vector<SubjectData> cohort;
    for (int s = 0; s < 3; ++s) {
      SubjectData helper;
      helper.subject_id = "h" + std::to_string(s);
      helper.series.emplace("Primary", testing::numeric_series(start, series(1.0)));
      helper.series.emplace("IndNeighbor", testing::numeric_series(start, series(0.8)));
      helper.series.emplace("PopNeighbor", testing::numeric_series(start, series(0.6)));
      cohort.push_back(std::move(helper));
    }
    SubjectData target;
    target.subject_id = "s0";
    target.series.emplace("Primary", testing::numeric_series(start, series(1.0)));
    target.series.emplace("IndNeighbor", testing::numeric_series(start, series(0.8)));
    std::vector<double> sparse(30, NAN);
    for (int i = 0; i < 5; ++i) sparse[static_cast<size_t>(i)] = base[static_cast<size_t>(i)];
    target.series.emplace("PopNeighbor", testing::numeric_series(start, sparse));
    MetricSeries text;
    text.kind = ValueKind::Textual;
    text.rows.push_back({start, true, 0.0, "fine"});
    target.series.emplace("Lifelog", std::move(text));
    cohort.push_back(target);

    EdgeWeightBundle bundle =
        global_weights_for_node(g, cohort, target, "primary", HbmConfig{});
    bool ok = bundle.neighbors.size() == 3;
    double prior_weight = 0.0, prior_expected = -1.0;
    for (const auto& nw : bundle.neighbors) {
      if (nw.name == "IndNeighbor") ok = ok && nw.path == FallbackPath::Individual;
      if (nw.name == "PopNeighbor") ok = ok && nw.path == FallbackPath::Population;
      if (nw.name == "Lifelog") {
        ok = ok && nw.path == FallbackPath::Prior;
        prior_weight = nw.w_global;
        prior_expected = g.edges.at(EdgeKey("primary", "lifelog")).prior_weight;
      }
    }
    ok = ok && prior_weight == prior_expected;  // exact, verbatim
    report(8, "fallback ladder (individual, population, prior)", ok,
           "prior path returns the stored edge weight exactly");
  }

  {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> unif(1e-6, 1.0 - 1e-6);
    bool ok = true;
    for (int i = 0; i < 10000 && ok; ++i) {
      double wg = unif(rng), wl = unif(rng), beta = unif(rng);
      double w = fuse(wg, wl, beta);
      ok = ok && w >= std::min(wg, wl) && w <= std::max(wg, wl);
      ok = ok && fuse(wg, wl, 0.0) == wg && fuse(wg, wl, 1.0) == wl;
    }
    report(9, "fusion convexity over 10,000 random triples", ok, "endpoints exact");
  }

  {
    auto t0 = Clock::now();
    auto fx = testing::make_adversarial_fixture();
    auto grid = log_grid(0.01, 100.0, 25);
    bool ok = true;
    std::string detail;
    try {
      CalibrationResult result = calibrate(fx.graph, fx.cohort, grid, HbmConfig{});
      const CurvePair& pop = result.population;
      for (size_t i = 1; i < grid.size(); ++i) {
        ok = ok && pop.preserve.taus[i] <= pop.preserve.taus[i - 1] + 1e-12;
        ok = ok && pop.align.taus[i] >= pop.align.taus[i - 1] - 1e-12;
      }
      auto interp = [&](const TauCurve& c, double alpha) {
        for (size_t i = 1; i < c.alphas.size(); ++i) {
          if (alpha <= c.alphas[i]) {
            double t = (alpha - c.alphas[i - 1]) / (c.alphas[i] - c.alphas[i - 1]);
            return c.taus[i - 1] + t * (c.taus[i] - c.taus[i - 1]);
          }
        }
        return c.taus.back();
      };
      ok = ok && std::abs(interp(pop.preserve, result.alpha_pop) -
                          interp(pop.align, result.alpha_pop)) <= 0.02;
      ok = ok && result.alpha_pop > grid.front() && result.alpha_pop < grid.back();
      double elapsed = seconds_since(t0);
      ok = ok && elapsed < 10.0;
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "18 nodes x 17 neighbors x 25-point grid, %.2f s, alpha_pop %.3f",
                    elapsed, result.alpha_pop);
      detail = buf;
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    report(10, "calibration curves monotone with interior intersection", ok, detail);
  }

  {
    StubKnowledgeProvider stub;
    StubEmbedder embedder;
    std::vector<std::string> names;
    for (int i = 1; i <= 52; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "Wearable metric %02d", i);
      names.push_back(buf);
    }
    KnowledgeGraph g = init_general_graph(names, stub);
    int k = 0;
    for (auto& [_, node] : g.nodes) {
      node.name_embedding = embedder.embed(node.name);
      if (k % 3 == 0) node.range = "0-100";
      if (k % 4 == 0) node.recommendations = "keep steady";
      if (k % 5 == 0) {
        node.data_source = DataSource{"cohort", node.name, "unit", ValueKind::Numeric, ""};
        node.is_data_associated = true;
      }
      ++k;
    }
    fs::path path = fs::temp_directory_path() / "wag_acceptance_graph.json";
    save_graph(g, path);
    KnowledgeGraph loaded = load_graph(path);
    report(11, "52-node graph persistence round trip is field-identical", loaded == g,
           "including full-precision embeddings");
  }

  {
    auto t0 = Clock::now();
    std::string first = pipeline_digest(fs::temp_directory_path() / "wag_acceptance_e2e_a");
    std::string second = pipeline_digest(fs::temp_directory_path() / "wag_acceptance_e2e_b");
    double elapsed = seconds_since(t0);
    bool ok = first == second && !first.empty() && elapsed < 60.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "10 subjects, 100 queries, %.2f s, %zu bytes", elapsed,
                  first.size());
    report(12, "end-to-end pipeline byte-identical across runs", ok, buf);
  }

  {
    // The published headline results (LLM-judged ~70% win rate, mean ranks
    // ~1.4 vs 2.0/2.6, Exp-G/Exp-L orderings, human-eval agreement) depend on
    // proprietary datasets and LLM judges and are NOT reproduced here.
    // Substitute checks: the aggregation arithmetic on a fixture in the same
    // format, and the local model's documented effect direction.
    bool ok = true;

    std::vector<RankRecord> records;
    for (int i = 0; i < 10; ++i) {
      RankRecord r;
      r.query_id = "q" + std::to_string(i);
      if (i < 7) {
        r.ranks = {{"wag", 1}, {"rag", 2}, {"base", 3}};
      } else {
        r.ranks = {{"wag", 2}, {"rag", 1}, {"base", 3}};
      }
      records.push_back(std::move(r));
    }
    auto summary = aggregate_rankings(records);
    ok = ok && summary.at("wag").win_rate == 0.7 && summary.at("rag").win_rate == 0.3 &&
         summary.at("base").win_rate == 0.0;
    ok = ok && std::abs(summary.at("wag").mean_rank - 1.3) < 1e-12;

    EffectScenario sc = make_effect_scenario();
    StubEmbedder embedder;
    RetrievalConfig cfg;
    ParsedQuery q;
    q.metrics = {"Focus"};
    q.window_days = 7;
    q.openness = 0.9;
    RetrievalResult r = retrieve(sc.graph, sc.cohort, sc.cohort[0], q, cfg, embedder);
    ok = ok && !r.no_match && r.retrieved.size() == 1;
    bool spiky_selected = false;
    for (const auto& sn : r.retrieved[0].selected)
      spiky_selected = spiky_selected || sn.global.name == "Spiky";
    ok = ok && spiky_selected;

    // under the global weights alone the anomalous neighbor is not in the
    // top budget (its prior weight trails every calm neighbor)
    EdgeWeightBundle bundle =
        global_weights_for_node(sc.graph, sc.cohort, sc.cohort[0], "focus", cfg.hbm());
    std::vector<ScoredNeighbor> by_global;
    for (const auto& nw : bundle.neighbors) {
      ScoredNeighbor sn;
      sn.global = nw;
      sn.w_final = nw.w_global;
      by_global.push_back(std::move(sn));
    }
    bool spiky_by_global = false;
    for (const auto& sn : select_top(by_global, r.retrieved[0].budget))
      spiky_by_global = spiky_by_global || sn.global.name == "Spiky";
    ok = ok && !spiky_by_global;

    report(13, "headline-claim substitutes (aggregation + local effect)", ok,
           "published win rates not reproducible offline; effect direction shown");
  }

  std::printf("================\n%s (%d criteria failed)\n",
              failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT", failures);
  return failures == 0 ? 0 : 1;
}
