#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wag/error.hpp"

namespace wag {

class KnowledgeProvider;
struct MetricSpec;

inline constexpr int kGraphSchemaVersion = 1;
// Pairs judged below this strength carry no edge.
inline constexpr double kMinEdgeWeight = 0.1;

enum class Category {
  Physiological,
  Sleep,
  Activity,
  Mental,
  Environmental,
  Lifestyle,
  Demographic,
};

const char* to_string(Category c);
Category category_from_string(const std::string& s);

enum class ValueKind { Numeric, Textual };

const char* to_string(ValueKind k);
ValueKind value_kind_from_string(const std::string& s);

enum class Provenance { LlmGenerated, Expert, Fixture };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

struct DataSource {
  std::string dataset;
  std::string feature;
  std::string unit;
  ValueKind value_kind = ValueKind::Numeric;
  std::string path;

  bool operator==(const DataSource&) const = default;
};

struct Node {
  std::string id;
  std::string name;
  Category category = Category::Physiological;
  std::string description;
  std::optional<std::string> range;
  std::optional<std::string> recommendations;
  std::optional<DataSource> data_source;
  std::optional<Eigen::VectorXd> name_embedding;  // unit norm when present
  bool is_data_associated = false;
};

bool operator==(const Node& a, const Node& b);

// Unordered node-id pair, canonicalized so that a <= b.
struct EdgeKey {
  std::string a;
  std::string b;

  EdgeKey() = default;
  EdgeKey(std::string x, std::string y) {
    if (y < x) std::swap(x, y);
    a = std::move(x);
    b = std::move(y);
  }
  auto operator<=>(const EdgeKey&) const = default;
};

struct Edge {
  EdgeKey key;
  std::string description;
  double prior_weight = 0.5;  // in [kMinEdgeWeight, 1.0]
  Provenance provenance = Provenance::LlmGenerated;
};

bool operator==(const Edge& a, const Edge& b);

struct KnowledgeGraph {
  int schema_version = kGraphSchemaVersion;
  std::map<std::string, Node> nodes;
  std::map<EdgeKey, Edge> edges;
};

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b);

struct IntegrationReport {
  std::vector<std::pair<std::string, std::string>> merged;  // (incoming metric, node id)
  std::vector<std::string> created;                         // node ids
  int new_edges = 0;
};

struct Neighbor {
  const Node* node = nullptr;
  const Edge* edge = nullptr;
};

// One node per metric, one edge per unordered pair with provider strength
// >= kMinEdgeWeight. Duplicate normalized names are rejected up front.
KnowledgeGraph init_general_graph(const std::vector<std::string>& metric_names,
                                  const KnowledgeProvider& knowledge);

// Merge into an existing node (per the provider's merge decision) or add a
// new node plus candidate edges to every existing node. Atomic: on provider
// failure the graph is left unmodified.
IntegrationReport integrate_metric(KnowledgeGraph& graph, const MetricSpec& spec,
                                   const KnowledgeProvider& knowledge);

// All nodes sharing an edge with node_id, ordered by (name, id) ascending.
// Pointers remain valid while the graph is unmodified.
std::vector<Neighbor> neighborhood(const KnowledgeGraph& graph, const std::string& node_id);

void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& destination);
KnowledgeGraph load_graph(const std::filesystem::path& source);

// JSON document form used by save/load; deterministic field and entry order.
std::string graph_to_json_string(const KnowledgeGraph& graph);
KnowledgeGraph graph_from_json_string(const std::string& text);

}  // namespace wag
