#include "wag/providers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "wag/text.hpp"

namespace wag {

double cosine_similarity(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size())
    throw ArgumentError("cosine_similarity: dimension mismatch (" +
                        std::to_string(u.size()) + " vs " + std::to_string(v.size()) + ")");
  double nu = u.norm();
  double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw ArgumentError("cosine_similarity: zero vector");
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

Eigen::VectorXd StubEmbedder::embed(std::string_view text) const {
  std::string norm = normalize_text(text);
  if (norm.empty()) throw ArgumentError("stub_embed: text empty after normalization");

  Eigen::VectorXd v = Eigen::VectorXd::Zero(kDim);
  std::string padded = "^" + norm + "$";
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    std::uint64_t h = fnv1a(std::string_view(padded).substr(i, 3));
    v(static_cast<Eigen::Index>(h % kDim)) += 1.0;
  }
  return v / v.norm();
}

KnowledgeFixture KnowledgeFixture::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("fixture document is not valid JSON: ") + e.what());
  }
  KnowledgeFixture f;
  if (j.contains("aliases")) {
    for (const auto& [key, val] : j.at("aliases").items())
      f.aliases[normalize_name(key)] = val.get<std::string>();
  }
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      std::string a = normalize_name(e.at("a").get<std::string>());
      std::string b = normalize_name(e.at("b").get<std::string>());
      if (b < a) std::swap(a, b);
      EdgeDraft d;
      d.strength = e.at("strength").get<double>();
      d.description = e.value("description", "");
      f.edges[{a, b}] = std::move(d);
    }
  }
  return f;
}

KnowledgeFixture KnowledgeFixture::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open fixture: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

NodeDraft StubKnowledgeProvider::node_gen(const MetricSpec& metric) const {
  NodeDraft d;
  d.name = metric.name;
  d.category = metric.category.value_or(Category::Physiological);
  d.description = metric.description.empty()
                      ? "Daily wearable metric '" + metric.name + "'."
                      : metric.description;
  return d;
}

EdgeDraft StubKnowledgeProvider::edge_gen(const NodeDraft& a, const NodeDraft& b) const {
  std::string na = normalize_name(a.name);
  std::string nb = normalize_name(b.name);
  if (nb < na) std::swap(na, nb);
  auto it = fixture_.edges.find({na, nb});
  if (it != fixture_.edges.end()) return it->second;
  EdgeDraft d;
  d.strength = kDefaultStrength;
  d.description = a.name + " is related to " + b.name + ".";
  return d;
}

std::optional<MergeDecision> StubKnowledgeProvider::merge(
    const MetricSpec& incoming, const std::vector<MergeCandidate>& candidates) const {
  std::string norm = normalize_name(incoming.name);
  std::string target = norm;
  auto alias = fixture_.aliases.find(norm);
  if (alias != fixture_.aliases.end()) target = normalize_name(alias->second);
  for (const auto& c : candidates) {
    std::string cn = normalize_name(c.name);
    if (cn == norm || cn == target) return MergeDecision{c.id, 1.0};
  }
  return std::nullopt;
}

namespace {

struct WindowPhrase {
  const char* phrase;
  std::optional<int> days;
};

// Granularity phrases, longest first so "past 14 days" wins over any prefix.
constexpr WindowPhrase kWindowPhrases[] = {
    {"past 14 days", 14}, {"past 30 days", 30}, {"past 60 days", 60},
    {"past 7 days", 7},   {"overall", std::nullopt}, {"today", 1},
};

struct OpennessCue {
  const char* cue;
  double openness;
};

// First matching cue wins. Values are the midpoints of the category
// openness ranges; "what factors" carries the causal-exploration level.
constexpr OpennessCue kOpennessCues[] = {
    {"what factors", 0.8},
    {"why", 0.85},          // exploratory analysis [0.7, 1.0]
    {"despite", 0.85},
    {"unusual", 0.7},       // anomaly detection [0.6, 0.8]
    {"abnormal", 0.7},
    {"deviation", 0.7},
    {"spike", 0.7},
    {"compare", 0.6},       // comparative insight [0.5, 0.7]
    {"compared to", 0.6},
    {"improved", 0.6},
    {"on days", 0.6},       // contextual queries [0.5, 0.7]
    {"relationship", 0.5},  // metric relationships [0.4, 0.6]
    {"relate", 0.5},
    {"correlate", 0.5},
    {"trend", 0.5},         // trend analysis [0.4, 0.6]
    {"pattern", 0.5},
    {"typically", 0.5},
    {"how to", 0.4},        // actionable advice [0.3, 0.5]
    {"how can i", 0.4},
    {"ways to", 0.4},
    {"improve", 0.4},
    {"what is", 0.3},       // general knowledge [0.2, 0.4]
    {"optimal", 0.3},
    {"what was", 0.2},      // data retrieval [0.1, 0.3]
    {"how many", 0.2},
    {"how much", 0.2},
    {"average", 0.2},
};

}  // namespace

ParsedQuery StubQueryParser::parse(std::string_view query,
                                   const std::vector<std::string>& metric_dictionary) const {
  std::string norm = normalize_text(query);
  ParsedQuery out;

  out.window_days = default_window_;
  for (const auto& wp : kWindowPhrases) {
    if (norm.find(wp.phrase) != std::string::npos) {
      out.window_days = wp.days;
      break;
    }
  }

  // Longest-substring entity match; matches nested inside a longer matched
  // name are dropped.
  std::vector<std::pair<std::string, std::string>> hits;  // (normalized, original)
  for (const auto& name : metric_dictionary) {
    std::string nn = normalize_text(name);
    if (!nn.empty() && norm.find(nn) != std::string::npos) hits.emplace_back(nn, name);
  }
  std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  for (const auto& [nn, original] : hits) {
    bool nested = false;
    for (const auto& kept : out.metrics) {
      if (normalize_text(kept).find(nn) != std::string::npos) {
        nested = true;
        break;
      }
    }
    if (!nested) out.metrics.push_back(original);
  }

  out.openness = 0.5;
  for (const auto& cue : kOpennessCues) {
    if (norm.find(cue.cue) != std::string::npos) {
      out.openness = cue.openness;
      break;
    }
  }
  return out;
}

}  // namespace wag
