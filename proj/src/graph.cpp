#include "wag/graph.hpp"

#include <algorithm>
#include <set>

#include "wag/providers.hpp"
#include "wag/text.hpp"

namespace wag {

const char* to_string(Category c) {
  switch (c) {
    case Category::Physiological: return "Physiological";
    case Category::Sleep: return "Sleep";
    case Category::Activity: return "Activity";
    case Category::Mental: return "Mental";
    case Category::Environmental: return "Environmental";
    case Category::Lifestyle: return "Lifestyle";
    case Category::Demographic: return "Demographic";
  }
  return "Physiological";
}

Category category_from_string(const std::string& s) {
  for (Category c : {Category::Physiological, Category::Sleep, Category::Activity,
                     Category::Mental, Category::Environmental, Category::Lifestyle,
                     Category::Demographic}) {
    if (s == to_string(c)) return c;
  }
  throw ArgumentError("unknown category: '" + s + "'");
}

const char* to_string(ValueKind k) {
  return k == ValueKind::Numeric ? "numeric" : "textual";
}

ValueKind value_kind_from_string(const std::string& s) {
  if (s == "numeric") return ValueKind::Numeric;
  if (s == "textual") return ValueKind::Textual;
  throw ArgumentError("unknown value kind: '" + s + "'");
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::LlmGenerated: return "llm-generated";
    case Provenance::Expert: return "expert";
    case Provenance::Fixture: return "fixture";
  }
  return "llm-generated";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "llm-generated") return Provenance::LlmGenerated;
  if (s == "expert") return Provenance::Expert;
  if (s == "fixture") return Provenance::Fixture;
  throw ArgumentError("unknown provenance: '" + s + "'");
}

bool operator==(const Node& a, const Node& b) {
  bool emb_equal =
      a.name_embedding.has_value() == b.name_embedding.has_value() &&
      (!a.name_embedding ||
       (a.name_embedding->size() == b.name_embedding->size() &&
        *a.name_embedding == *b.name_embedding));
  return a.id == b.id && a.name == b.name && a.category == b.category &&
         a.description == b.description && a.range == b.range &&
         a.recommendations == b.recommendations && a.data_source == b.data_source &&
         a.is_data_associated == b.is_data_associated && emb_equal;
}

bool operator==(const Edge& a, const Edge& b) {
  return a.key == b.key && a.description == b.description &&
         a.prior_weight == b.prior_weight && a.provenance == b.provenance;
}

bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  return a.schema_version == b.schema_version && a.nodes == b.nodes && a.edges == b.edges;
}

namespace {

NodeDraft draft_of(const Node& n) {
  return NodeDraft{n.name, n.category, n.description, n.range, n.recommendations};
}

Node node_from_draft(const NodeDraft& d, std::string id) {
  Node n;
  n.id = std::move(id);
  n.name = d.name;
  n.category = d.category;
  n.description = d.description;
  n.range = d.range;
  n.recommendations = d.recommendations;
  return n;
}

std::string unique_id(const KnowledgeGraph& g, const std::string& name) {
  std::string base = slugify(name);
  if (base.empty()) base = "node";
  std::string id = base;
  int suffix = 2;
  while (g.nodes.count(id)) id = base + "-" + std::to_string(suffix++);
  return id;
}

EdgeDraft checked_edge_gen(const KnowledgeProvider& knowledge, const NodeDraft& a,
                           const NodeDraft& b) {
  EdgeDraft d;
  try {
    d = knowledge.edge_gen(a, b);
  } catch (const std::exception& e) {
    throw Error("edge_gen failed for pair ('" + a.name + "', '" + b.name + "'): " + e.what());
  }
  if (!(d.strength >= 0.0 && d.strength <= 1.0))
    throw ValidationError("edge_gen strength out of [0,1] for pair ('" + a.name + "', '" +
                          b.name + "')");
  return d;
}

DataSource data_source_from_spec(const MetricSpec& spec) {
  DataSource ds;
  ds.dataset = spec.dataset.value_or("");
  ds.feature = spec.feature.value_or(spec.name);
  ds.unit = spec.unit.value_or("");
  ds.value_kind = spec.value_kind;
  ds.path = spec.path.value_or("");
  return ds;
}

}  // namespace

KnowledgeGraph init_general_graph(const std::vector<std::string>& metric_names,
                                  const KnowledgeProvider& knowledge) {
  if (metric_names.empty()) throw ArgumentError("init_general_graph: no metric names");

  std::set<std::string> seen;
  std::string duplicates;
  for (const auto& name : metric_names) {
    if (!seen.insert(normalize_name(name)).second)
      duplicates += (duplicates.empty() ? "" : ", ") + name;
  }
  if (!duplicates.empty())
    throw ArgumentError("init_general_graph: duplicate metric names after normalization: " +
                        duplicates);

  KnowledgeGraph g;
  std::vector<std::string> ids;
  for (const auto& name : metric_names) {
    MetricSpec spec;
    spec.name = name;
    NodeDraft draft = knowledge.node_gen(spec);
    std::string id = unique_id(g, draft.name);
    g.nodes.emplace(id, node_from_draft(draft, id));
    ids.push_back(id);
  }
  for (size_t i = 0; i < ids.size(); ++i) {
    for (size_t j = i + 1; j < ids.size(); ++j) {
      const Node& a = g.nodes.at(ids[i]);
      const Node& b = g.nodes.at(ids[j]);
      EdgeDraft d = checked_edge_gen(knowledge, draft_of(a), draft_of(b));
      if (d.strength < kMinEdgeWeight) continue;
      Edge e;
      e.key = EdgeKey(a.id, b.id);
      e.description = d.description;
      e.prior_weight = d.strength;
      g.edges.emplace(e.key, std::move(e));
    }
  }
  return g;
}

IntegrationReport integrate_metric(KnowledgeGraph& graph, const MetricSpec& spec,
                                   const KnowledgeProvider& knowledge) {
  if (spec.name.empty()) throw ArgumentError("integrate_metric: metric has no name");

  // Work on a copy; commit only when every provider call succeeded.
  KnowledgeGraph working = graph;
  IntegrationReport report;

  std::vector<MergeCandidate> candidates;
  candidates.reserve(working.nodes.size());
  for (const auto& [id, node] : working.nodes)
    candidates.push_back(MergeCandidate{id, node.name, node.description});

  std::optional<MergeDecision> decision = knowledge.merge(spec, candidates);
  if (decision) {
    auto it = working.nodes.find(decision->matched_id);
    if (it == working.nodes.end())
      throw ValidationError("merge matched unknown node id '" + decision->matched_id + "'");
    // UpdateNode path: attach the sensor-specific record, keep the concept.
    Node& node = it->second;
    node.data_source = data_source_from_spec(spec);
    node.is_data_associated = true;
    report.merged.emplace_back(spec.name, node.id);
    graph = std::move(working);
    return report;
  }

  NodeDraft draft = knowledge.node_gen(spec);
  std::string id = unique_id(working, draft.name);
  Node node = node_from_draft(draft, id);
  node.data_source = data_source_from_spec(spec);
  node.is_data_associated = true;

  std::vector<std::string> existing;
  existing.reserve(working.nodes.size());
  for (const auto& [eid, _] : working.nodes) existing.push_back(eid);

  working.nodes.emplace(id, std::move(node));
  for (const auto& eid : existing) {
    const Node& other = working.nodes.at(eid);
    EdgeDraft d = checked_edge_gen(knowledge, draft_of(other), draft);
    if (d.strength < kMinEdgeWeight) continue;
    Edge e;
    e.key = EdgeKey(eid, id);
    e.description = d.description;
    e.prior_weight = d.strength;
    working.edges.emplace(e.key, std::move(e));
    ++report.new_edges;
  }
  report.created.push_back(id);
  graph = std::move(working);
  return report;
}

std::vector<Neighbor> neighborhood(const KnowledgeGraph& graph, const std::string& node_id) {
  if (!graph.nodes.count(node_id)) throw NotFoundError(node_id);

  std::vector<Neighbor> out;
  for (const auto& [key, edge] : graph.edges) {
    const std::string* other = nullptr;
    if (key.a == node_id)
      other = &key.b;
    else if (key.b == node_id)
      other = &key.a;
    else
      continue;
    auto it = graph.nodes.find(*other);
    if (it == graph.nodes.end())
      throw Error("edge endpoint '" + *other + "' missing from graph");
    out.push_back(Neighbor{&it->second, &edge});
  }
  std::sort(out.begin(), out.end(), [](const Neighbor& x, const Neighbor& y) {
    if (x.node->name != y.node->name) return x.node->name < y.node->name;
    return x.node->id < y.node->id;
  });
  return out;
}

}  // namespace wag
