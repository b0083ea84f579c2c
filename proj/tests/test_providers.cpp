#include <doctest.h>

#include "wag/error.hpp"
#include "wag/providers.hpp"

using namespace wag;
using doctest::Approx;

TEST_CASE("cosine similarity reference values") {
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(4, 0);
  Eigen::VectorXd e2 = Eigen::VectorXd::Unit(4, 1);
  CHECK_EQ(cosine_similarity(e1, e1), 1.0);
  CHECK_EQ(cosine_similarity(e1, e2), 0.0);
  CHECK_EQ(cosine_similarity(e1, Eigen::VectorXd(-e1)), -1.0);

  CHECK_THROWS_AS(cosine_similarity(e1, Eigen::VectorXd::Zero(4)), ArgumentError);
  CHECK_THROWS_AS(cosine_similarity(e1, Eigen::VectorXd::Unit(3, 0)), ArgumentError);
}

TEST_CASE("stub embedding is deterministic, normalized and case-insensitive") {
  StubEmbedder embedder;
  Eigen::VectorXd a = embedder.embed("Heart rate");
  Eigen::VectorXd b = embedder.embed("Heart rate");
  CHECK_EQ(a, b);
  CHECK_EQ(a.size(), 64);
  CHECK_EQ(a.norm(), Approx(1.0).epsilon(1e-12));

  // normalization collapses case and whitespace
  CHECK_EQ(embedder.embed("heart  rate"), embedder.embed("Heart Rate"));

  // distinct texts do not collide (computed with the stub itself)
  double sim = cosine_similarity(embedder.embed("Heart rate"),
                                 embedder.embed("Sleep efficiency"));
  CHECK(sim < 1.0);

  CHECK_THROWS_AS(embedder.embed("  ?! "), ArgumentError);
}

TEST_CASE("stub knowledge provider fixture behavior") {
  KnowledgeFixture fixture = KnowledgeFixture::from_json_string(R"({
    "aliases": {"steps": "Steps taken"},
    "edges": [{"a": "Exercise", "b": "Sleep efficiency", "strength": 0.8,
               "description": "Regular exercise improves sleep"}]
  })");
  StubKnowledgeProvider provider(fixture);

  SUBCASE("edge_gen echoes the fixture entry in either order") {
    NodeDraft ex{"Exercise", Category::Activity, "", {}, {}};
    NodeDraft se{"Sleep efficiency", Category::Sleep, "", {}, {}};
    CHECK_EQ(provider.edge_gen(ex, se).strength, 0.8);
    CHECK_EQ(provider.edge_gen(se, ex).strength, 0.8);
  }

  SUBCASE("edge_gen falls back to the neutral default") {
    NodeDraft a{"Anxiety", Category::Mental, "", {}, {}};
    NodeDraft b{"Steps taken", Category::Activity, "", {}, {}};
    CHECK_EQ(provider.edge_gen(a, b).strength, 0.5);
  }

  SUBCASE("merge resolves aliases with similarity 1.0") {
    MetricSpec spec;
    spec.name = "steps";
    auto decision = provider.merge(spec, {{"n1", "Steps taken", ""}, {"n2", "Heart rate", ""}});
    REQUIRE(decision.has_value());
    CHECK_EQ(decision->matched_id, "n1");
    CHECK_EQ(decision->similarity, 1.0);
  }

  SUBCASE("merge declines distinct names") {
    MetricSpec spec;
    spec.name = "VO2 max";
    CHECK_FALSE(provider.merge(spec, {{"n1", "Steps taken", ""}}).has_value());
  }

  SUBCASE("node_gen copies the record verbatim") {
    MetricSpec spec;
    spec.name = "Resting heart rate";
    spec.description = "Beats per minute at rest";
    spec.category = Category::Physiological;
    NodeDraft draft = provider.node_gen(spec);
    CHECK_EQ(draft.name, "Resting heart rate");
    CHECK_EQ(draft.description, "Beats per minute at rest");
  }
}

TEST_CASE("stub query parser extracts window, metrics and openness") {
  StubQueryParser parser;
  std::vector<std::string> dictionary = {"Sleep efficiency", "Heart rate",
                                         "Circadian rhythm patterns", "Sleep"};

  SUBCASE("window phrases") {
    CHECK_EQ(parser.parse("How was my sleep today?", dictionary).window_days, 1);
    CHECK_EQ(parser.parse("Average heart rate past 14 days?", dictionary).window_days, 14);
    CHECK_EQ(parser.parse("trends over the past 30 days", dictionary).window_days, 30);
    CHECK_EQ(parser.parse("my heart rate for the past 60 days", dictionary).window_days, 60);
    CHECK_FALSE(parser.parse("How is my heart rate overall?", dictionary).window_days.has_value());
  }

  SUBCASE("no time phrase falls back to the 7-day default") {
    CHECK_EQ(parser.parse("How is my heart rate?", dictionary).window_days, 7);
  }

  SUBCASE("longest metric match wins over nested names") {
    ParsedQuery q = parser.parse("How is my sleep efficiency over the past 7 days?", dictionary);
    REQUIRE_EQ(q.metrics.size(), 1);
    CHECK_EQ(q.metrics[0], "Sleep efficiency");
  }

  SUBCASE("multi-metric queries detect every named metric") {
    ParsedQuery q =
        parser.parse("Does my heart rate relate to sleep efficiency?", dictionary);
    CHECK_EQ(q.metrics.size(), 2);
  }

  SUBCASE("worked example: causal-factor circadian query") {
    ParsedQuery q = parser.parse(
        "What factors might be causing the significant deviations in my circadian rhythm "
        "patterns over the past 30 days?",
        dictionary);
    REQUIRE_EQ(q.metrics.size(), 1);
    CHECK_EQ(q.metrics[0], "Circadian rhythm patterns");
    CHECK_EQ(q.openness, 0.8);
    CHECK_EQ(q.window_days, 30);
  }

  SUBCASE("cue-free queries sit at the neutral midpoint") {
    CHECK_EQ(parser.parse("My sleep over the past 7 days", dictionary).openness, 0.5);
  }

  SUBCASE("exploratory phrasing scores high") {
    CHECK_EQ(parser.parse("Why am I so tired?", dictionary).openness, 0.85);
  }
}
