#include "wag/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "wag/local.hpp"
#include "wag/stats.hpp"

namespace wag {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::set<int> kAllowedWindows = {1, 7, 14, 30, 60};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

void RetrievalConfig::validate() const {
  if (kappa < 0) throw ArgumentError("config: kappa must be >= 0");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ArgumentError("config: beta outside [0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw ArgumentError("config: delta outside (0, 1]");
  if (default_window < 1) throw ArgumentError("config: default_window must be >= 1");
  if (!(gamma_global > 0.0 && gamma_local > 0.0))
    throw ArgumentError("config: gamma values must be positive");
  if (!(alpha_pop > 0.0 && alpha_ind > 0.0))
    throw ArgumentError("config: alpha values must be positive");
  if (min_samples < 1) throw ArgumentError("config: min_samples must be >= 1");
}

RetrievalConfig RetrievalConfig::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("config is not valid JSON: ") + e.what());
  }
  RetrievalConfig cfg;
  try {
    if (j.contains("kappa")) cfg.kappa = j.at("kappa").get<int>();
    if (j.contains("beta")) cfg.beta = j.at("beta").get<double>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
    if (j.contains("default_window")) cfg.default_window = j.at("default_window").get<int>();
    if (j.contains("gamma_global")) cfg.gamma_global = j.at("gamma_global").get<double>();
    if (j.contains("gamma_local")) cfg.gamma_local = j.at("gamma_local").get<double>();
    if (j.contains("alpha_pop")) cfg.alpha_pop = j.at("alpha_pop").get<double>();
    if (j.contains("alpha_ind")) cfg.alpha_ind = j.at("alpha_ind").get<double>();
    if (j.contains("min_samples")) cfg.min_samples = j.at("min_samples").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("config field has wrong type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RetrievalConfig RetrievalConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

std::string RetrievalConfig::to_json_string() const {
  ordered_json j;
  j["kappa"] = kappa;
  j["beta"] = beta;
  j["delta"] = delta;
  j["default_window"] = default_window;
  j["gamma_global"] = gamma_global;
  j["gamma_local"] = gamma_local;
  j["alpha_pop"] = alpha_pop;
  j["alpha_ind"] = alpha_ind;
  j["min_samples"] = min_samples;
  return j.dump(2) + "\n";
}

ParsedQuery parse_query(std::string_view text, const std::vector<std::string>& dictionary,
                        const QueryParserProvider& parser) {
  if (dictionary.empty()) throw ArgumentError("parse_query: empty metric dictionary");
  ParsedQuery q = parser.parse(text, dictionary);
  if (!(q.openness >= 0.0 && q.openness <= 1.0))
    throw ValidationError("parser returned openness outside [0, 1]");
  if (q.window_days && !kAllowedWindows.count(*q.window_days))
    throw ValidationError("parser returned window of " + std::to_string(*q.window_days) +
                          " days (allowed: 1, 7, 14, 30, 60, all)");
  return q;
}

MatchResult match_entities(const std::vector<std::string>& metrics,
                           const KnowledgeGraph& graph, const EmbeddingProvider& embedder,
                           double delta) {
  MatchResult out;
  // On-demand embedding cache; stored embeddings win when present.
  std::map<std::string, Eigen::VectorXd> cache;
  auto embedding_of = [&](const Node& node) -> const Eigen::VectorXd& {
    if (node.name_embedding) return *node.name_embedding;
    auto it = cache.find(node.id);
    if (it == cache.end()) it = cache.emplace(node.id, embedder.embed(node.name)).first;
    return it->second;
  };

  for (const auto& metric : metrics) {
    Eigen::VectorXd qv = embedder.embed(metric);
    const Node* best = nullptr;
    double best_sim = -2.0;
    for (const auto& [_, node] : graph.nodes) {
      double sim = cosine_similarity(qv, embedding_of(node));
      if (sim > best_sim || (sim == best_sim && best && node.name < best->name)) {
        best = &node;
        best_sim = sim;
      }
    }
    if (best && best_sim >= delta) {
      out.primaries.push_back(PrimaryMatch{metric, best->id, best->name, best_sim});
    } else {
      out.misses.push_back(metric);
    }
  }
  return out;
}

std::vector<int> neighbor_budget(double eta, int kappa, int primary_count) {
  if (primary_count < 1) throw ArgumentError("neighbor_budget: no primary nodes");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ArgumentError("neighbor_budget: eta outside [0, 1]");
  if (kappa < 0) throw ArgumentError("neighbor_budget: kappa must be >= 0");

  int total = static_cast<int>(std::floor(eta * kappa + 0.5));
  total = std::clamp(total, 0, kappa);
  std::vector<int> budgets(static_cast<size_t>(primary_count), total / primary_count);
  int remainder = total % primary_count;
  for (int i = 0; i < remainder; ++i) ++budgets[static_cast<size_t>(i)];
  return budgets;
}

double fuse(double w_global, double w_local, double beta) {
  if (!(w_global > 0.0 && w_global <= 1.0))
    throw ArgumentError("fuse: w_global outside (0, 1]");
  if (!(w_local > 0.0 && w_local < 1.0)) throw ArgumentError("fuse: w_local outside (0, 1)");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ArgumentError("fuse: beta outside [0, 1]");
  return (1.0 - beta) * w_global + beta * w_local;
}

std::vector<ScoredNeighbor> select_top(std::vector<ScoredNeighbor> candidates, int budget) {
  if (budget < 0) throw ArgumentError("select_top: negative budget");
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ScoredNeighbor& a, const ScoredNeighbor& b) {
                     if (a.w_final != b.w_final) return a.w_final > b.w_final;
                     return a.global.w_global > b.global.w_global;
                   });
  if (static_cast<size_t>(budget) < candidates.size())
    candidates.resize(static_cast<size_t>(budget));
  return candidates;
}

namespace {

struct WindowStats {
  bool has_numeric = false;
  double deviation = std::numeric_limits<double>::quiet_NaN();
};

// Signed z-score of the window mean against the series history.
WindowStats window_deviation(const MetricSeries* series, Date t, int k) {
  WindowStats out;
  if (!series || series->kind != ValueKind::Numeric) return out;
  out.has_numeric = true;
  double mean = 0.0;
  int n = 0;
  for (const auto& r : series->rows) {
    if (!r.present) continue;
    mean += r.value;
    ++n;
  }
  if (n < 2) return out;
  mean /= n;
  double ss = 0.0;
  for (const auto& r : series->rows) {
    if (!r.present) continue;
    ss += (r.value - mean) * (r.value - mean);
  }
  double sd = std::sqrt(ss / (n - 1));
  if (sd == 0.0) return out;

  const Date lo = t - (k - 1);
  double wsum = 0.0;
  int wn = 0;
  for (const auto& r : series->rows) {
    if (r.date < lo || t < r.date || !r.present) continue;
    wsum += r.value;
    ++wn;
  }
  if (wn == 0) return out;
  out.deviation = (wsum / wn - mean) / sd;
  return out;
}

void render_data_table(std::string& doc, const std::string& name,
                       const MetricSeries* series, Date t, int k) {
  doc += "Data:\n";
  doc += "| date | " + name + " |\n";
  const Date lo = t - (k - 1);
  // Walk the window day by day; a date absent from the series renders empty.
  size_t row = 0;
  for (Date d = lo; d <= t; d = d + 1) {
    std::string cell;
    if (series) {
      while (row < series->rows.size() && series->rows[row].date < d) ++row;
      if (row < series->rows.size() && series->rows[row].date == d &&
          series->rows[row].present) {
        cell = series->kind == ValueKind::Numeric ? fmt(series->rows[row].value)
                                                  : series->rows[row].text;
      }
    }
    doc += "| " + to_string(d) + " | " + cell + " |\n";
  }
}

void render_deviation_line(std::string& doc, const MetricSeries* series, Date t, int k) {
  WindowStats ws = window_deviation(series, t, k);
  std::string z = std::isnan(ws.deviation) ? "nan" : fmt(ws.deviation, "%.2f");
  doc += "Recent " + std::to_string(k) + "-day value deviates from the individual's average by " +
         z + " standard deviations.\n";
}

const MetricSeries* series_of(const SubjectData& subject, const Node& node) {
  const std::string key = node.data_source && !node.data_source->feature.empty()
                              ? node.data_source->feature
                              : node.name;
  return subject.find_series(key);
}

}  // namespace

std::string render_context(const KnowledgeGraph& graph, const SubjectData& subject,
                           const std::vector<PrimaryRetrieval>& retrieved, Date t, int k) {
  std::string doc = "Matched nodes:\n";
  for (const auto& pr : retrieved) {
    const Node& node = graph.nodes.at(pr.node_id);
    doc += "\n" + node.name + ":\n";
    doc += "description: " + node.description + "\n";
    if (node.range) doc += "range: " + *node.range + "\n";
    if (node.recommendations) doc += "recommendations: " + *node.recommendations + "\n";
    const MetricSeries* series = series_of(subject, node);
    render_data_table(doc, node.name, series, t, k);
    render_deviation_line(doc, series, t, k);
  }

  bool any_selected = false;
  for (const auto& pr : retrieved) any_selected = any_selected || !pr.selected.empty();
  if (!any_selected) return doc;

  doc += "\nNodes related to matched nodes which might be helpful:\n";
  for (const auto& pr : retrieved) {
    const Node& primary = graph.nodes.at(pr.node_id);
    for (const auto& sel : pr.selected) {
      const Node& nb = graph.nodes.at(sel.global.node_id);
      const Edge& edge = graph.edges.at(EdgeKey(primary.id, nb.id));
      doc += "\n" + nb.name + " is related to " + primary.name + ":\n";
      doc += edge.description + "\n";
      doc += "\n" + nb.name + ":\n";
      doc += "description: " + nb.description + "\n";
      render_data_table(doc, nb.name, series_of(subject, nb), t, k);
    }
  }
  return doc;
}

RetrievalResult retrieve(const KnowledgeGraph& graph,
                         const std::vector<SubjectData>& cohort, const SubjectData& subject,
                         const ParsedQuery& parsed, const RetrievalConfig& cfg,
                         const EmbeddingProvider& embedder) {
  cfg.validate();
  if (!(parsed.openness >= 0.0 && parsed.openness <= 1.0))
    throw ArgumentError("retrieve: openness outside [0, 1]");

  RetrievalResult result;
  result.openness = parsed.openness;

  MatchResult match = match_entities(parsed.metrics, graph, embedder, cfg.delta);
  result.primaries = match.primaries;
  result.misses = match.misses;
  if (match.primaries.empty()) {
    result.no_match = true;
    return result;
  }

  // Reference day: query-supplied, else the subject's last dated row.
  Date t{0};
  bool any_rows = false;
  for (const auto& [_, s] : subject.series) {
    for (const auto& r : s.rows) {
      t = any_rows ? std::max(t, r.date) : r.date;
      any_rows = true;
    }
  }
  Date first{t};
  for (const auto& [_, s] : subject.series)
    for (const auto& r : s.rows) first = std::min(first, r.date);
  if (parsed.reference_time) t = *parsed.reference_time;
  int k = parsed.window_days ? *parsed.window_days : std::max(t - first + 1, 1);
  result.reference_time = t;
  result.window_days = k;

  // Unique primary nodes in ascending name order drive budgets and output.
  std::vector<std::pair<std::string, std::string>> unique;  // (name, id)
  for (const auto& p : match.primaries) {
    bool seen = false;
    for (const auto& u : unique) seen = seen || u.second == p.node_id;
    if (!seen) unique.emplace_back(p.node_name, p.node_id);
  }
  std::sort(unique.begin(), unique.end());

  std::vector<int> budgets =
      neighbor_budget(parsed.openness, cfg.kappa, static_cast<int>(unique.size()));

  for (size_t i = 0; i < unique.size(); ++i) {
    const std::string& node_id = unique[i].second;
    PrimaryRetrieval pr;
    pr.node_id = node_id;
    pr.budget = budgets[i];

    EdgeWeightBundle bundle = global_weights_for_node(graph, cohort, subject, node_id, cfg.hbm());
    std::vector<Neighbor> neighbors = neighborhood(graph, node_id);
    std::map<std::string, LocalWeight> locals =
        local_weights_for_node(subject, neighbors, t, k, parsed.openness, cfg.gamma_local);

    std::vector<ScoredNeighbor> candidates;
    candidates.reserve(bundle.neighbors.size());
    for (const auto& nw : bundle.neighbors) {
      const LocalWeight& lw = locals.at(nw.node_id);
      ScoredNeighbor sn;
      sn.global = nw;
      sn.zeta = lw.zeta;
      sn.zeta_valid = lw.valid;
      sn.w_local = lw.w_local;
      sn.w_final = fuse(nw.w_global, lw.w_local, cfg.beta);
      candidates.push_back(std::move(sn));
    }
    pr.selected = select_top(std::move(candidates), pr.budget);
    result.retrieved.push_back(std::move(pr));
  }

  result.context = render_context(graph, subject, result.retrieved, t, k);
  return result;
}

namespace {

ordered_json neighbor_to_json(const ScoredNeighbor& sn) {
  const NeighborWeight& g = sn.global;
  ordered_json j;
  j["node_id"] = g.node_id;
  j["name"] = g.name;
  j["w_prior"] = g.w_prior;
  j["r_pop"] = g.r_pop ? ordered_json(*g.r_pop) : ordered_json(nullptr);
  j["n_pop"] = g.n_pop;
  j["r_ind"] = g.r_ind ? ordered_json(*g.r_ind) : ordered_json(nullptr);
  j["n_ind"] = g.n_ind;
  j["mu_pop"] = g.mu_pop;
  j["mu_ind"] = g.mu_ind;
  j["w_global"] = g.w_global;
  j["fallback_path"] = to_string(g.path);
  j["zeta"] = sn.zeta;
  j["zeta_valid"] = sn.zeta_valid;
  j["w_local"] = sn.w_local;
  j["w_final"] = sn.w_final;
  return j;
}

}  // namespace

std::string RetrievalResult::to_json_string() const {
  ordered_json j;
  j["no_match"] = no_match;
  j["reference_time"] = no_match ? "" : to_string(reference_time);
  j["window_days"] = window_days;
  j["openness"] = openness;
  ordered_json prim = ordered_json::array();
  for (const auto& p : primaries) {
    prim.push_back({{"metric", p.metric},
                    {"node_id", p.node_id},
                    {"node_name", p.node_name},
                    {"similarity", p.similarity}});
  }
  j["primaries"] = std::move(prim);
  j["misses"] = misses;
  ordered_json ret = ordered_json::array();
  for (const auto& pr : retrieved) {
    ordered_json pj;
    pj["node_id"] = pr.node_id;
    pj["budget"] = pr.budget;
    ordered_json sel = ordered_json::array();
    for (const auto& sn : pr.selected) sel.push_back(neighbor_to_json(sn));
    pj["selected"] = std::move(sel);
    ret.push_back(std::move(pj));
  }
  j["retrieved"] = std::move(ret);
  j["context"] = context;
  return j.dump(2) + "\n";
}

}  // namespace wag
