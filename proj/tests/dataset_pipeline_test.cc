#include "claimeval/dataset_pipeline.h"

#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "claimeval/errors.h"
#include "stubs.h"

namespace claimeval {
namespace {

ClaimGroup group(std::string id, std::vector<std::string> claims, std::vector<std::string> evidence) {
  ClaimGroup g{std::move(id), {}, std::move(claims), std::move(evidence)};
  for (std::size_t i = 0; i < g.claims.size(); ++i) g.claim_ids.push_back(g.group_id + "-" + std::to_string(i));
  return g;
}

const ArticleSentences kVienna{"Vienna",
                               {"Vienna is a city.", "Vienna is the capital of Austria and its largest city.",
                                "It lies on the Danube."}};

TEST(SelectArticle, ModalTitleWithLexicographicTies) {
  EXPECT_EQ(select_article(group("g", {"x"}, {"B", "A", "B"})), "B");
  EXPECT_EQ(select_article(group("g", {"x"}, {"B", "A"})), "A");
  EXPECT_EQ(select_article(group("g", {"x"}, {})), std::nullopt);
}

TEST(Locate, FindsSentenceEntailingMostClaims) {
  mock::Entailment nli;
  auto g = group("g", {"Vienna is the capital of Austria", "its largest city"}, {"Vienna"});
  EXPECT_EQ(locate_source_sentence(g, kVienna, nli), 1u);
  auto lies = group("g", {"It lies on the Danube"}, {"Vienna"});
  EXPECT_EQ(locate_source_sentence(lies, kVienna, nli), 2u);
  auto none = group("g", {"Paris is in France"}, {"Vienna"});
  EXPECT_EQ(locate_source_sentence(none, kVienna, nli), std::nullopt);
}

TEST(Locate, TiesBrokenByMeanProbabilityThenIndex) {
  // Both sentences entail one claim; the second has the higher mean.
  stub::Entailment nli([](std::string_view p, std::string_view h) {
    if (p == "s0") return h == "a" ? 0.9 : 0.1;
    if (p == "s1") return h == "b" ? 0.9 : 0.3;
    return 0.0;
  });
  ArticleSentences article{"T", {"s0", "s1", "s2"}};
  EXPECT_EQ(locate_source_sentence(group("g", {"a", "b"}, {"T"}), article, nli), 1u);
  stub::Entailment flat([](std::string_view, std::string_view) { return 0.7; });
  EXPECT_EQ(locate_source_sentence(group("g", {"a", "b"}, {"T"}), article, flat), 0u);
}

TEST(Locate, PremiseTemplateAndThreshold) {
  std::vector<std::string> premises;
  stub::Entailment record([&](std::string_view p, std::string_view) {
    premises.emplace_back(p);
    return 0.6;
  });
  ArticleSentences article{"Title", {"One."}};
  LocateOptions options{0.5, "{title}: {sentence}"};
  EXPECT_EQ(locate_source_sentence(group("g", {"c"}, {"Title"}), article, record, options), 0u);
  EXPECT_EQ(premises.front(), "Title: One.");
  options.threshold = 0.65;
  EXPECT_EQ(locate_source_sentence(group("g", {"c"}, {"Title"}), article, record, options), std::nullopt);
  options.threshold = 1.0;
  EXPECT_THROW(locate_source_sentence(group("g", {"c"}, {"Title"}), article, record, options), ConfigError);
}

TEST(Locate, BackendFailureNamesGroup) {
  stub::Entailment broken([](std::string_view, std::string_view) -> double { throw std::runtime_error("timeout"); });
  try {
    locate_source_sentence(group("grp42", {"c"}, {"Vienna"}), kVienna, broken);
    FAIL();
  } catch (const BackendError& e) {
    EXPECT_NE(std::string(e.what()).find("grp42"), std::string::npos);
  }
}

TEST(BuildDocument, NeighboursAndBoundaries) {
  auto first = build_document(kVienna, 0, "d0");
  EXPECT_EQ(first.context_before, "");
  EXPECT_EQ(first.context_after, kVienna.sentences[1]);
  auto middle = build_document(kVienna, 1, "d1");
  EXPECT_EQ(middle.page_title, "Vienna");
  EXPECT_EQ(middle.context_before, kVienna.sentences[0]);
  EXPECT_EQ(middle.source_sentence, kVienna.sentences[1]);
  EXPECT_EQ(middle.context_after, kVienna.sentences[2]);
  EXPECT_EQ(build_document(kVienna, 2, "d2").context_after, "");
  EXPECT_THROW(build_document(kVienna, 3, "d3"), DataError);
}

TEST(Split, TenSingletonTitles) {
  std::vector<Document> docs;
  for (int t = 0; t < 10; ++t) docs.push_back({"d" + std::to_string(t), "t" + std::to_string(t), "", "s", ""});
  auto split = split_corpus(docs);
  EXPECT_EQ(split.documents[0].size(), 8u);
  EXPECT_EQ(split.documents[1].size(), 1u);
  EXPECT_EQ(split.documents[2].size(), 1u);
  EXPECT_EQ(split.assignment.size(), 10u);
}

TEST(Split, RejectsBadRatiosAndTooFewTitles) {
  std::vector<Document> docs;
  for (int t = 0; t < 5; ++t) docs.push_back({"d" + std::to_string(t), "t" + std::to_string(t), "", "s", ""});
  EXPECT_THROW(split_corpus(docs, {0.8, 0.1, 0.2}), ConfigError);
  EXPECT_THROW(split_corpus(docs, {0.9, 0.1, 0.0}), ConfigError);
  std::vector<Document> two{{"a", "t1", "", "s", ""}, {"b", "t2", "", "s", ""}, {"c", "t2", "", "s", ""}};
  EXPECT_THROW(split_corpus(two), DataError);
}

TEST(Split, DeterministicForSeed) {
  std::mt19937_64 rng(1);
  std::vector<Document> docs;
  for (int i = 0; i < 200; ++i) {
    docs.push_back({"d" + std::to_string(i), "t" + std::to_string(rng() % 40), "", "s", ""});
  }
  auto a = split_corpus(docs, {}, 7);
  auto b = split_corpus(docs, {}, 7);
  EXPECT_EQ(a.assignment, b.assignment);
}

TEST(Split, PartitionProperty) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> titles(3, 60), size(1, 8);
    std::vector<Document> docs;
    int n_titles = titles(rng);
    int max_group = 0;
    for (int t = 0; t < n_titles; ++t) {
      int s = size(rng);
      max_group = std::max(max_group, s);
      for (int i = 0; i < s; ++i) {
        docs.push_back({"t" + std::to_string(t) + "-" + std::to_string(i), "title" + std::to_string(t), "", "s", ""});
      }
    }
    auto split = split_corpus(docs, {}, rng());
    std::map<std::string, int> title_split;
    std::size_t total = 0;
    for (int s = 0; s < 3; ++s) {
      total += split.documents[s].size();
      for (const auto& d : split.documents[s]) {
        auto [it, inserted] = title_split.emplace(d.page_title, s);
        ASSERT_EQ(it->second, s) << "title " << d.page_title << " spans two splits";
        ASSERT_EQ(split.assignment.at(d.doc_id), static_cast<Split>(s));
      }
      ASSERT_LE(std::abs(static_cast<double>(split.documents[s].size()) - split.targets[s]), max_group);
    }
    ASSERT_EQ(total, docs.size());
  }
}

TEST(EntityRecall, SetArithmetic) {
  mock::CapitalizedEntities ner;
  Document d{"d", "", "", "Barack Obama visited Paris.", ""};
  ClaimSet verbatim{"d", "m", {{"c", "d", "Barack Obama visited Paris.", "m"}}};
  EXPECT_DOUBLE_EQ(entity_word_recall(d, verbatim, ner), 1.0);
  Document only_obama{"d", "", "", "Barack Obama spoke.", ""};
  ClaimSet partial{"d", "m", {{"c", "d", "The president Obama spoke.", "m"}}};
  EXPECT_DOUBLE_EQ(entity_word_recall(only_obama, partial, ner), 0.5);
  Document no_entities{"d", "", "", "it rained.", ""};
  EXPECT_DOUBLE_EQ(entity_word_recall(no_entities, partial, ner), 1.0);
  EXPECT_THROW(entity_word_recall(d, ClaimSet{"d", "m", {}}, ner), DataError);
}

TEST(EntityRecall, MonotoneInClaims) {
  mock::CapitalizedEntities ner;
  Document d{"d", "", "", "Marie Curie met Pierre Curie in Paris and Warsaw.", ""};
  const std::vector<std::string> texts{"Marie won.", "He met Pierre.", "nothing", "Warsaw is in Poland.",
                                       "Paris and Curie."};
  ClaimSet set{"d", "m", {}};
  double last = 0.0;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    set.claims.push_back({"c" + std::to_string(i), "d", texts[i], "m"});
    double r = entity_word_recall(d, set, ner);
    EXPECT_GE(r, last);
    last = r;
  }
  EXPECT_DOUBLE_EQ(last, 1.0);
}

TEST(Reconstruct, MapsAndTossesWithReasons) {
  std::vector<ClaimGroup> groups{group("g1", {"Vienna is the capital of Austria"}, {"Vienna", "Austria", "Vienna"}),
                                 group("g2", {"Paris is in Germany"}, {"Vienna"}),
                                 group("g3", {"x"}, {}),
                                 group("g4", {"x"}, {"Atlantis"})};
  auto r = reconstruct(groups, std::vector<ArticleSentences>{kVienna}, mock::Entailment{});
  ASSERT_EQ(r.mapping.size(), 4u);
  EXPECT_EQ(r.mapping[0].status, "mapped");
  EXPECT_EQ(r.mapping[0].sentence_index, 1u);
  EXPECT_EQ(r.mapping[1].reason, "no_entailment");
  EXPECT_EQ(r.mapping[2].reason, "no_evidence");
  EXPECT_EQ(r.mapping[3].reason, "article_missing");
  ASSERT_EQ(r.documents.size(), 1u);
  EXPECT_EQ(r.documents[0].doc_id, "g1");
  ASSERT_EQ(r.gold.size(), 1u);
  EXPECT_TRUE(r.gold[0].is_gold());
  EXPECT_EQ(r.gold[0].claims[0].claim_id, "g1-0");
}

TEST(Reconstruct, WorkerCountDoesNotChangeOutput) {
  std::vector<ClaimGroup> groups;
  std::vector<ArticleSentences> articles;
  for (int a = 0; a < 20; ++a) {
    ArticleSentences art{"A" + std::to_string(a), {}};
    for (int s = 0; s < 4; ++s) art.sentences.push_back("fact " + std::to_string(a) + " number " + std::to_string(s));
    articles.push_back(art);
    groups.push_back(group("g" + std::to_string(a), {"number " + std::to_string(a % 4)}, {art.title}));
  }
  auto one = reconstruct(groups, articles, mock::Entailment{}, {{}, 1});
  auto four = reconstruct(groups, articles, mock::Entailment{}, {{}, 4});
  ASSERT_EQ(one.mapping.size(), four.mapping.size());
  for (std::size_t i = 0; i < one.mapping.size(); ++i) {
    EXPECT_EQ(one.mapping[i].sentence_index, four.mapping[i].sentence_index);
  }
}

TEST(Readers, ClaimGroupsAndArticles) {
  std::istringstream claims(
      R"({"group_id":7,"text":"a","evidence_articles":["X"]})" "\n"
      R"({"group_id":7,"text":"b","claim_id":"cb","evidence_articles":["X","Y"]})" "\n"
      R"({"group_id":"h","text":"c"})" "\n");
  auto groups = read_claim_groups(claims, "claims");
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].group_id, "7");
  EXPECT_EQ(groups[0].claim_ids, (std::vector<std::string>{"7-0", "cb"}));
  EXPECT_EQ(groups[0].evidence_articles.size(), 3u);
  EXPECT_TRUE(groups[1].evidence_articles.empty());

  std::istringstream articles(R"({"title":"X","sentences":[]})");
  EXPECT_THROW(read_articles(articles, "articles"), ParseError);
}

}  // namespace
}  // namespace claimeval
