#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wag/hbm.hpp"
#include "wag/providers.hpp"

namespace wag {

struct RetrievalConfig {
  int kappa = 5;            // max related nodes retrieved per query
  double beta = 0.5;        // global/local fusion weight
  double delta = 0.85;      // entity-match similarity threshold
  int default_window = 7;   // days, when the query names none
  double gamma_global = 0.9;
  double gamma_local = 0.7;
  double alpha_pop = 1.0;
  double alpha_ind = 1.0;
  int min_samples = 10;

  HbmConfig hbm() const {
    return HbmConfig{alpha_pop, alpha_ind, min_samples, gamma_global};
  }

  void validate() const;
  static RetrievalConfig from_json_string(const std::string& text);
  static RetrievalConfig load(const std::filesystem::path& path);
  std::string to_json_string() const;
};

// Provider parse plus invariant validation (openness in [0,1], window in
// {1,7,14,30,60} or all).
ParsedQuery parse_query(std::string_view text, const std::vector<std::string>& dictionary,
                        const QueryParserProvider& parser);

struct PrimaryMatch {
  std::string metric;
  std::string node_id;
  std::string node_name;
  double similarity = 0.0;
};

struct MatchResult {
  std::vector<PrimaryMatch> primaries;
  std::vector<std::string> misses;
};

// Best node per query metric by cosine similarity of name embeddings,
// accepted iff similarity >= delta. Embeddings are computed on demand; the
// graph itself is never modified.
MatchResult match_entities(const std::vector<std::string>& metrics,
                           const KnowledgeGraph& graph, const EmbeddingProvider& embedder,
                           double delta);

// Total = round-half-up(eta * kappa) clamped to [0, kappa]; split evenly,
// remainder to the first entries (callers pass primaries in ascending name
// order).
std::vector<int> neighbor_budget(double eta, int kappa, int primary_count);

// (1 - beta) * w_global + beta * w_local.
double fuse(double w_global, double w_local, double beta);

struct ScoredNeighbor {
  NeighborWeight global;
  double zeta = 0.0;
  bool zeta_valid = false;
  double w_local = 0.5;
  double w_final = 0.0;
};

// Top-k by w_final descending, ties by w_global descending, then input
// order (stable).
std::vector<ScoredNeighbor> select_top(std::vector<ScoredNeighbor> candidates, int budget);

struct PrimaryRetrieval {
  std::string node_id;
  int budget = 0;
  std::vector<ScoredNeighbor> selected;
};

struct RetrievalResult {
  bool no_match = false;
  Date reference_time{};
  int window_days = 0;  // resolved; "all" becomes the data span
  double openness = 0.5;
  std::vector<PrimaryMatch> primaries;  // one entry per matched query metric
  std::vector<std::string> misses;
  std::vector<PrimaryRetrieval> retrieved;  // deduped by node, name ascending
  std::string context;

  std::string to_json_string() const;
};

// Full query-time pipeline. Read-only over graph and data; deterministic.
RetrievalResult retrieve(const KnowledgeGraph& graph,
                         const std::vector<SubjectData>& cohort, const SubjectData& subject,
                         const ParsedQuery& parsed, const RetrievalConfig& cfg,
                         const EmbeddingProvider& embedder);

// Plain-text context document: one section per primary (description, range/
// recommendation lines, date/value table over [t-k+1, t], deviation line),
// then a related-nodes block per selected neighbor.
std::string render_context(const KnowledgeGraph& graph, const SubjectData& subject,
                           const std::vector<PrimaryRetrieval>& retrieved, Date t, int k);

}  // namespace wag
