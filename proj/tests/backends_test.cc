#include "claimeval/backends.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "claimeval/errors.h"

namespace claimeval {
namespace {

TEST(RelationSet, DeduplicatesUndirectedPairs) {
  RelationSet s;
  EXPECT_TRUE(s.insert({"A", "B", "leads"}));
  EXPECT_FALSE(s.insert({"B", "A", "led_by"}));
  EXPECT_TRUE(s.insert({"A", "C", "knows"}));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains("B", "A"));
  EXPECT_FALSE(s.contains("B", "C"));
  RelationSet init{{"x", "y", "p"}, {"y", "x", "q"}};
  EXPECT_EQ(init.size(), 1u);
}

TEST(Capabilities, NamesRoundTrip) {
  for (auto c : all_capabilities()) EXPECT_EQ(capability_from_string(to_string(c)), c);
  EXPECT_EQ(all_capabilities().size(), 7u);
  try {
    capability_from_string("summarizer");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("alignment"), std::string::npos);
  }
}

TEST(MockAlignment, TokenOverlapShare) {
  EXPECT_DOUBLE_EQ(mock::alignment("the cat sat", "the cat"), 1.0);
  EXPECT_DOUBLE_EQ(mock::alignment("the cat", "the dog"), 0.5);
  EXPECT_DOUBLE_EQ(mock::alignment("", "the dog"), 0.0);
  EXPECT_DOUBLE_EQ(mock::alignment("the dog", ""), 0.0);
  EXPECT_DOUBLE_EQ(mock::alignment("The Cat.", "cat"), 1.0);
}

TEST(MockEntailment, ContiguousContainment) {
  EXPECT_DOUBLE_EQ(mock::entailment("Vienna is the capital of Austria.", "the capital of Austria"), 1.0);
  // Same tokens, broken sequence: half the overlap.
  EXPECT_DOUBLE_EQ(mock::entailment("Austria has Vienna as capital", "Vienna capital"), 0.5);
  EXPECT_DOUBLE_EQ(mock::entailment("Paris is in France", "Berlin is big"), 0.5 * 1.0 / 3.0);
}

TEST(MockRelations, MicroGrammar) {
  EXPECT_EQ(mock::relations("Curie won the Nobel Prize.").size(), 1u);
  EXPECT_EQ(mock::relations("Curie won prizes and Curie married Pierre").size(), 2u);
  EXPECT_EQ(mock::relations("Curie won prizes and prizes won Curie").size(), 1u);
  EXPECT_EQ(mock::relations("Hello there").size(), 0u);
  auto r = mock::relations("Curie won the prize.");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r.relations()[0].source, "Curie");
  EXPECT_EQ(r.relations()[0].predicate, "won");
  EXPECT_EQ(r.relations()[0].target, "the prize");
}

TEST(MockEntities, CapitalizedRuns) {
  EXPECT_EQ(mock::entities("Barack Obama met Angela Merkel in Berlin."),
            (std::vector<std::string>{"Barack Obama", "Angela Merkel", "Berlin"}));
  EXPECT_TRUE(mock::entities("nothing here").empty());
}

TEST(MockPerplexity, OnePlusTokenCount) {
  EXPECT_DOUBLE_EQ(mock::perplexity("a b c"), 4.0);
  EXPECT_DOUBLE_EQ(mock::perplexity(""), 1.0);
}

class Constant final : public AlignmentScorer {
 public:
  explicit Constant(double v) : v_(v) {}
  std::string_view impl_id() const override { return "constant"; }

 protected:
  double raw_score(std::string_view, std::string_view) const override { return v_; }

 private:
  double v_;
};

TEST(AlignmentScorer, ClampsOutOfRangeAndNan) {
  EXPECT_DOUBLE_EQ(Constant(1.7).score("p", "h"), 1.0);
  EXPECT_DOUBLE_EQ(Constant(-0.2).score("p", "h"), 0.0);
  EXPECT_DOUBLE_EQ(Constant(std::numeric_limits<double>::quiet_NaN()).score("p", "h"), 0.0);
  EXPECT_DOUBLE_EQ(Constant(0.25).score("p", "h"), 0.25);
  EXPECT_FALSE(Constant(0).thread_safe());
}

TEST(Registry, DefaultsToMock) {
  auto b = resolve_backend(Capability::kAlignment, {});
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->impl_id(), "mock");
  EXPECT_EQ(b->capability(), Capability::kAlignment);
  EXPECT_EQ(resolve_backend("ner", {{"impl", "mock"}})->capability(), Capability::kEntityRecognition);
}

TEST(Registry, UnknownImplIsConfigErrorListingIds) {
  try {
    resolve_backend(Capability::kEntailment, {{"impl", "roberta"}});
    FAIL();
  } catch (const ConfigError& e) {
    std::string what = e.what();
    EXPECT_NE(what.find("roberta"), std::string::npos);
    EXPECT_NE(what.find("mock"), std::string::npos);
  }
}

TEST(Registry, CustomBackendsCanBeAdded) {
  auto& registry = BackendRegistry::global();
  registry.add(Capability::kAlignment, "constant-test",
               [](const BackendConfig& c) { return std::make_shared<Constant>(std::stod(c.at("value"))); });
  auto ids = registry.ids(Capability::kAlignment);
  EXPECT_NE(std::find(ids.begin(), ids.end(), "constant-test"), ids.end());
  auto set = resolve_backends({{Capability::kAlignment, {{"impl", "constant-test"}, {"value", "0.3"}}}});
  EXPECT_DOUBLE_EQ(set.alignment->score("a", "b"), 0.3);
  EXPECT_EQ(set.relation_extractor->impl_id(), "mock");
  EXPECT_FALSE(set.all_thread_safe());
}

TEST(Registry, MockSetIsCompleteAndThreadSafe) {
  auto set = BackendSet::mocks();
  for (auto c : all_capabilities()) EXPECT_TRUE(set.has(c)) << to_string(c);
  EXPECT_TRUE(set.all_thread_safe());
  BackendSet empty;
  EXPECT_FALSE(empty.has(Capability::kAlignment));
}

TEST(Registry, AdaptersFailLoudlyWithoutResources) {
  EXPECT_THROW(resolve_backend(Capability::kAlignment, {{"impl", "table"}}), BackendError);
  EXPECT_THROW(resolve_backend(Capability::kAlignment, {{"impl", "table"}, {"path", "/nonexistent.jsonl"}}),
               BackendError);
  EXPECT_THROW(resolve_backend(Capability::kAlignment, {{"impl", "http"}}), BackendError);
}

}  // namespace
}  // namespace claimeval
