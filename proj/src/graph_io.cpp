#include <fstream>
#include <nlohmann/json.hpp>

#include "wag/graph.hpp"

namespace wag {

namespace {

using ordered_json = nlohmann::ordered_json;
using nlohmann::json;

ordered_json node_to_json(const Node& n) {
  ordered_json j;
  j["id"] = n.id;
  j["name"] = n.name;
  j["category"] = to_string(n.category);
  j["description"] = n.description;
  if (n.range) j["range"] = *n.range;
  if (n.recommendations) j["recommendations"] = *n.recommendations;
  if (n.data_source) {
    const DataSource& ds = *n.data_source;
    j["data_source"] = {{"dataset", ds.dataset},
                        {"feature", ds.feature},
                        {"unit", ds.unit},
                        {"value_kind", to_string(ds.value_kind)},
                        {"path", ds.path}};
  }
  if (n.name_embedding) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < n.name_embedding->size(); ++i)
      arr.push_back((*n.name_embedding)(i));
    j["name_embedding"] = std::move(arr);
  }
  j["is_data_associated"] = n.is_data_associated;
  return j;
}

ordered_json edge_to_json(const Edge& e) {
  ordered_json j;
  j["endpoints"] = {e.key.a, e.key.b};
  j["description"] = e.description;
  j["prior_weight"] = e.prior_weight;
  j["provenance"] = to_string(e.provenance);
  return j;
}

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError("graph schema error at " + path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(path + "." + key, "missing field");
  return *it;
}

std::string require_string(const json& j, const char* key, const std::string& path) {
  const json& v = require(j, key, path);
  if (!v.is_string()) schema_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Node node_from_json(const json& j, const std::string& path) {
  Node n;
  n.id = require_string(j, "id", path);
  n.name = require_string(j, "name", path);
  if (n.name.empty()) schema_fail(path + ".name", "empty name");
  try {
    n.category = category_from_string(require_string(j, "category", path));
  } catch (const ArgumentError& e) {
    schema_fail(path + ".category", e.what());
  }
  n.description = require_string(j, "description", path);
  if (j.contains("range")) n.range = j.at("range").get<std::string>();
  if (j.contains("recommendations"))
    n.recommendations = j.at("recommendations").get<std::string>();
  if (j.contains("data_source")) {
    const json& d = j.at("data_source");
    const std::string dpath = path + ".data_source";
    DataSource ds;
    ds.dataset = require_string(d, "dataset", dpath);
    ds.feature = require_string(d, "feature", dpath);
    ds.unit = require_string(d, "unit", dpath);
    try {
      ds.value_kind = value_kind_from_string(require_string(d, "value_kind", dpath));
    } catch (const ArgumentError& e) {
      schema_fail(dpath + ".value_kind", e.what());
    }
    ds.path = require_string(d, "path", dpath);
    n.data_source = std::move(ds);
  }
  if (j.contains("name_embedding")) {
    const json& arr = j.at("name_embedding");
    if (!arr.is_array()) schema_fail(path + ".name_embedding", "expected an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    Eigen::Index i = 0;
    for (const auto& x : arr) {
      if (!x.is_number()) schema_fail(path + ".name_embedding", "expected numbers");
      v(i++) = x.get<double>();
    }
    n.name_embedding = std::move(v);
  }
  const json& flag = require(j, "is_data_associated", path);
  if (!flag.is_boolean()) schema_fail(path + ".is_data_associated", "expected a boolean");
  n.is_data_associated = flag.get<bool>();
  return n;
}

Edge edge_from_json(const json& j, const std::string& path) {
  const json& eps = require(j, "endpoints", path);
  if (!eps.is_array() || eps.size() != 2 || !eps[0].is_string() || !eps[1].is_string())
    schema_fail(path + ".endpoints", "expected [\"id_a\", \"id_b\"]");
  std::string a = eps[0].get<std::string>();
  std::string b = eps[1].get<std::string>();
  if (!(a < b)) schema_fail(path + ".endpoints", "ids must satisfy id_a < id_b");
  Edge e;
  e.key = EdgeKey(std::move(a), std::move(b));
  e.description = require_string(j, "description", path);
  const json& w = require(j, "prior_weight", path);
  if (!w.is_number()) schema_fail(path + ".prior_weight", "expected a number");
  e.prior_weight = w.get<double>();
  if (!(e.prior_weight >= kMinEdgeWeight && e.prior_weight <= 1.0))
    schema_fail(path + ".prior_weight", "outside [0.1, 1.0]");
  try {
    e.provenance = provenance_from_string(require_string(j, "provenance", path));
  } catch (const ArgumentError& ex) {
    schema_fail(path + ".provenance", ex.what());
  }
  return e;
}

}  // namespace

std::string graph_to_json_string(const KnowledgeGraph& graph) {
  ordered_json j;
  j["schema_version"] = graph.schema_version;
  ordered_json nodes = ordered_json::array();
  for (const auto& [_, node] : graph.nodes) nodes.push_back(node_to_json(node));
  j["nodes"] = std::move(nodes);
  ordered_json edges = ordered_json::array();
  for (const auto& [_, edge] : graph.edges) edges.push_back(edge_to_json(edge));
  j["edges"] = std::move(edges);
  return j.dump(2) + "\n";
}

KnowledgeGraph graph_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("graph document is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("graph schema error at $: expected an object");
  const json& ver = require(j, "schema_version", "$");
  if (!ver.is_number_integer()) schema_fail("$.schema_version", "expected an integer");
  int version = ver.get<int>();
  if (version != kGraphSchemaVersion)
    throw SchemaError("incompatible graph schema version " + std::to_string(version) +
                      " (expected " + std::to_string(kGraphSchemaVersion) + ")");

  KnowledgeGraph g;
  g.schema_version = version;
  const json& nodes = require(j, "nodes", "$");
  if (!nodes.is_array()) schema_fail("$.nodes", "expected an array");
  size_t idx = 0;
  for (const auto& nj : nodes) {
    std::string path = "$.nodes[" + std::to_string(idx++) + "]";
    Node n = node_from_json(nj, path);
    if (!g.nodes.emplace(n.id, n).second) schema_fail(path + ".id", "duplicate node id");
  }
  const json& edges = require(j, "edges", "$");
  if (!edges.is_array()) schema_fail("$.edges", "expected an array");
  idx = 0;
  for (const auto& ej : edges) {
    std::string path = "$.edges[" + std::to_string(idx++) + "]";
    Edge e = edge_from_json(ej, path);
    if (!g.nodes.count(e.key.a) || !g.nodes.count(e.key.b))
      schema_fail(path + ".endpoints", "endpoint not present in nodes");
    if (!g.edges.emplace(e.key, e).second) schema_fail(path, "duplicate edge");
  }
  return g;
}

void save_graph(const KnowledgeGraph& graph, const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + destination.string());
  out << graph_to_json_string(graph);
  if (!out) throw IoError("write failed: " + destination.string());
}

KnowledgeGraph load_graph(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + source.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return graph_from_json_string(text);
}

}  // namespace wag
