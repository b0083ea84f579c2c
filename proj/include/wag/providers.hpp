#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wag/dates.hpp"
#include "wag/graph.hpp"

namespace wag {

// Structured components extracted from a free-text query.
struct ParsedQuery {
  std::vector<std::string> metrics;      // detected metric names
  std::optional<int> window_days;        // nullopt = all history
  std::optional<Date> reference_time;    // absent: resolved against the data
  double openness = 0.5;                 // in [0, 1]
};

// Incoming metric record for graph integration.
struct MetricSpec {
  std::string name;
  ValueKind value_kind = ValueKind::Numeric;
  std::string description;
  std::optional<std::string> dataset;
  std::optional<std::string> feature;
  std::optional<std::string> unit;
  std::optional<std::string> path;
  std::optional<Category> category;
};

struct NodeDraft {
  std::string name;
  Category category = Category::Physiological;
  std::string description;
  std::optional<std::string> range;
  std::optional<std::string> recommendations;
};

struct EdgeDraft {
  std::string description;
  double strength = 0.5;  // in [0, 1]
};

struct MergeCandidate {
  std::string id;
  std::string name;
  std::string description;
};

struct MergeDecision {
  std::string matched_id;
  double similarity = 0.0;  // in [0, 1]
};

// Contracts for externally-intelligent dependencies. Implementations must be
// safe for concurrent calls; the stubs are stateless and deterministic.

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  // Unit vector of dimension dim(); identical input gives an identical vector.
  virtual Eigen::VectorXd embed(std::string_view text) const = 0;
  virtual int dim() const = 0;
};

class QueryParserProvider {
 public:
  virtual ~QueryParserProvider() = default;
  virtual ParsedQuery parse(std::string_view query,
                            const std::vector<std::string>& metric_dictionary) const = 0;
};

class KnowledgeProvider {
 public:
  virtual ~KnowledgeProvider() = default;
  virtual NodeDraft node_gen(const MetricSpec& metric) const = 0;
  virtual EdgeDraft edge_gen(const NodeDraft& a, const NodeDraft& b) const = 0;
  virtual std::optional<MergeDecision> merge(
      const MetricSpec& incoming, const std::vector<MergeCandidate>& candidates) const = 0;
};

// dot(u,v) / (|u||v|), clamped into [-1, 1]. Zero vectors and dimension
// mismatches are argument errors.
double cosine_similarity(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Offline embedding stand-in: hashed character-trigram counts of the
// normalized text, L2-normalized, dimension 64.
class StubEmbedder final : public EmbeddingProvider {
 public:
  static constexpr int kDim = 64;

  Eigen::VectorXd embed(std::string_view text) const override;
  int dim() const override { return kDim; }
};

// Optional deterministic overrides for the stub knowledge provider.
// File form: {"aliases": {"steps": "Steps taken"},
//             "edges": [{"a": ..., "b": ..., "strength": ..., "description": ...}]}
struct KnowledgeFixture {
  std::map<std::string, std::string> aliases;                 // normalized name -> node name
  std::map<std::pair<std::string, std::string>, EdgeDraft> edges;  // normalized name pair

  static KnowledgeFixture from_json_string(const std::string& text);
  static KnowledgeFixture load(const std::filesystem::path& path);
};

class StubKnowledgeProvider final : public KnowledgeProvider {
 public:
  StubKnowledgeProvider() = default;
  explicit StubKnowledgeProvider(KnowledgeFixture fixture) : fixture_(std::move(fixture)) {}

  // Fills the draft from the metric record verbatim.
  NodeDraft node_gen(const MetricSpec& metric) const override;
  // Fixture entry when present, else strength kDefaultStrength with a
  // templated description.
  EdgeDraft edge_gen(const NodeDraft& a, const NodeDraft& b) const override;
  // Duplicate iff normalized names are equal or an alias maps onto a
  // candidate; similarity 1.0.
  std::optional<MergeDecision> merge(
      const MetricSpec& incoming, const std::vector<MergeCandidate>& candidates) const override;

  static constexpr double kDefaultStrength = 0.5;

 private:
  KnowledgeFixture fixture_;
};

// Offline query parser: phrase table for the window, longest
// normalized-substring match for metrics, cue table for openness.
class StubQueryParser final : public QueryParserProvider {
 public:
  explicit StubQueryParser(int default_window = 7) : default_window_(default_window) {}

  ParsedQuery parse(std::string_view query,
                    const std::vector<std::string>& metric_dictionary) const override;

 private:
  int default_window_;
};

}  // namespace wag
