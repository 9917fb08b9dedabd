#include "claimeval/validation_stats.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "claimeval/errors.h"
#include "oracles.h"

namespace claimeval {
namespace {

using oracle::Grid;
constexpr auto _ = std::nullopt;

TEST(Majority, TiesGoToLowerLabel) {
  EXPECT_EQ(majority_label(std::vector<int>{3, 3, 1}), 3);
  EXPECT_EQ(majority_label(std::vector<int>{3, 2}), 2);
  EXPECT_EQ(majority_label(std::vector<int>{0, 1, 1, 0}), 0);
  EXPECT_THROW(majority_label(std::vector<int>{}), DataError);
}

TEST(Binarize, TopOfScaleOnly) {
  std::vector<AnnotationRecord> r{{"a", "x", Metric::kFluency, 3, ""}, {"a", "y", Metric::kFluency, 3, ""},
                                  {"a", "z", Metric::kFluency, 2, ""}, {"b", "x", Metric::kFluency, 2, ""},
                                  {"b", "y", Metric::kFluency, 3, ""}, {"c", "x", Metric::kAtomicity, 1, ""},
                                  {"g", "x", Metric::kCoverageCheck, 1, "m1"},
                                  {"g", "x", Metric::kCoverageCheck, 0, "m2"}};
  auto f = binarize_grades(r, Metric::kFluency);
  EXPECT_EQ(f, (std::map<std::string, int>{{"a", 1}, {"b", 0}}));
  EXPECT_EQ(binarize_grades(r, Metric::kAtomicity), (std::map<std::string, int>{{"c", 1}}));
  EXPECT_EQ(binarize_grades(r, Metric::kCoverageCheck), (std::map<std::string, int>{{"g@m1", 1}, {"g@m2", 0}}));
}

TEST(RoundProbability, InclusiveThreshold) {
  EXPECT_EQ(round_probability(0.5), 1);
  EXPECT_EQ(round_probability(0.4999), 0);
  EXPECT_EQ(round_probability(0.7, 0.8), 0);
}

TEST(F1, MatchesCountingOracle) {
  std::mt19937_64 rng(17);
  std::bernoulli_distribution coin(0.5), keep(0.8);
  for (int trial = 0; trial < 300; ++trial) {
    std::map<std::string, int> p, g;
    for (int i = 0; i < 12; ++i) {
      auto id = std::to_string(i);
      if (keep(rng)) p[id] = coin(rng);
      if (keep(rng)) g[id] = coin(rng);
    }
    bool overlap = false;
    for (const auto& [id, v] : p) overlap |= g.contains(id);
    if (!overlap) {
      EXPECT_THROW(f1_binary(p, g), DataError);
      continue;
    }
    ASSERT_NEAR(f1_binary(p, g), oracle::f1(p, g), 1e-15);
  }
}

TEST(F1, PerfectAndNoPositives) {
  std::map<std::string, int> a{{"x", 1}, {"y", 0}};
  EXPECT_DOUBLE_EQ(f1_binary(a, a), 1.0);
  std::map<std::string, int> zeros{{"x", 0}, {"y", 0}};
  EXPECT_DOUBLE_EQ(f1_binary(zeros, a), 0.0);
  EXPECT_THROW(f1_binary(a, {{"z", 1}}), DataError);
}

TEST(Rmse, KnownValuesAndSharedIdsOnly) {
  std::map<std::string, double> p{{"a", 0.5}, {"b", 1.0}, {"extra", 0.0}};
  std::map<std::string, double> g{{"a", 0.0}, {"b", 1.0}};
  EXPECT_DOUBLE_EQ(rmse(p, g), std::sqrt(0.125));
  EXPECT_DOUBLE_EQ(rmse(g, g), 0.0);
}

TEST(Brier, KnownValuesAndRange) {
  EXPECT_DOUBLE_EQ(brier({{"a", 0.9}, {"b", 0.2}}, {{"a", 1}, {"b", 0}}), (0.01 + 0.04) / 2.0);
  EXPECT_DOUBLE_EQ(brier({{"a", 1.0}}, {{"a", 1}}), 0.0);
  EXPECT_THROW(brier({{"a", 1.2}}, {{"a", 1}}), DataError);
  EXPECT_THROW(brier({{"a", 0.2}}, {{"b", 1}}), DataError);
}

TEST(Brier, EqualsRmseSquared) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, double> p, o_real;
    std::map<std::string, int> o;
    for (int i = 0; i < 20; ++i) {
      auto id = std::to_string(i);
      p[id] = u(rng);
      o[id] = coin(rng);
      o_real[id] = o[id];
    }
    double r = rmse(p, o_real);
    ASSERT_NEAR(brier(p, o), r * r, 1e-12);
  }
}

TEST(AnnotationMatrix, CellsAndDuplicates) {
  AnnotationMatrix m({0, 1});
  m.add("i1", "a", 1);
  m.add("i1", "b", 0);
  m.add("i2", "b", 1);
  EXPECT_EQ(m.items().size(), 2u);
  EXPECT_EQ(m.annotators().size(), 2u);
  EXPECT_EQ(m.label_count(), 3u);
  EXPECT_EQ(m.labels(0), (std::vector<int>{1, 0}));
  EXPECT_EQ(m.label("i2", "b"), 1);
  EXPECT_EQ(m.label("i2", "a"), std::nullopt);
  EXPECT_THROW(m.add("i1", "a", 0), DataError);
}

TEST(AnnotationMatrix, FromRecords) {
  std::vector<AnnotationRecord> r{{"c", "x", Metric::kFluency, 3, ""}, {"c", "y", Metric::kFluency, 1, ""},
                                  {"d", "x", Metric::kAtomicity, 1, ""}};
  auto bin = annotation_matrix(r, Metric::kFluency);
  EXPECT_EQ(bin.categories(), (std::set<int>{0, 1}));
  EXPECT_EQ(bin.labels(0), (std::vector<int>{1, 0}));
  auto raw = annotation_matrix(r, Metric::kFluency, false);
  EXPECT_EQ(raw.categories(), (std::set<int>{0, 1, 2, 3}));
  EXPECT_EQ(raw.labels(0), (std::vector<int>{3, 1}));
}

TEST(Agreement, GwetWorkedExample) {
  // Three unanimous positives and one split item: Pa = 3/4,
  // pi = (7/8, 1/8), Pe = 2 * 7/8 * 1/8 = 0.21875, AC1 = 0.68.
  Grid g{{1, 1}, {1, 1}, {1, 1}, {1, 0}};
  auto m = oracle::to_matrix(g, 2);
  EXPECT_NEAR(*gwet_ac1(m), 0.68, 1e-12);
  EXPECT_DOUBLE_EQ(percent_agreement(m), 0.75);
}

TEST(Agreement, CrossedPairFromCoincidenceMatrix) {
  // Two units each holding one A and one B: D_o = 1, D_e = 4/3 * 2 * 2 / 4.
  Grid g{{0, 1}, {1, 0}};
  auto m = oracle::to_matrix(g, 2);
  EXPECT_DOUBLE_EQ(*krippendorff_alpha(m), -0.5);
  EXPECT_DOUBLE_EQ(*oracle::krippendorff_alpha(g), -0.5);
  EXPECT_DOUBLE_EQ(percent_agreement(m), 0.0);
}

TEST(Agreement, UnanimousTwoCategories) {
  Grid g{{1, 1, 1}, {0, 0, 0}, {1, 1, _}};
  auto m = oracle::to_matrix(g, 2);
  EXPECT_DOUBLE_EQ(*krippendorff_alpha(m), 1.0);
  EXPECT_DOUBLE_EQ(*gwet_ac1(m), 1.0);
  EXPECT_DOUBLE_EQ(percent_agreement(m), 1.0);
}

TEST(Agreement, SingleCategoryAlphaUndefined) {
  Grid g{{1, 1}, {1, 1}, {1, _}};
  auto m = oracle::to_matrix(g, 2);
  EXPECT_EQ(krippendorff_alpha(m), std::nullopt);
  EXPECT_DOUBLE_EQ(*gwet_ac1(m), 1.0);
}

TEST(Agreement, NothingPairable) {
  Grid g{{1, _}, {_, 0}};
  auto m = oracle::to_matrix(g, 2);
  EXPECT_THROW(krippendorff_alpha(m), DataError);
  EXPECT_THROW(gwet_ac1(m), DataError);
  EXPECT_THROW(percent_agreement(m), DataError);
}

TEST(Agreement, MatchesOraclesOnRandomMatrices) {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::uniform_int_distribution<int> items(1, 5), annotators(2, 5), cats(2, 4);
    int q = cats(rng);
    auto g = oracle::random_grid(rng, items(rng), annotators(rng), q, 0.3, 2);
    auto m = oracle::to_matrix(g, q);
    auto expected_alpha = oracle::krippendorff_alpha(g);
    auto alpha = krippendorff_alpha(m);
    ASSERT_EQ(alpha.has_value(), expected_alpha.has_value()) << trial;
    if (alpha) ASSERT_NEAR(*alpha, *expected_alpha, 1e-12) << trial;
    ASSERT_NEAR(*gwet_ac1(m), oracle::gwet_ac1(g, q), 1e-12) << trial;
    ASSERT_NEAR(percent_agreement(m), oracle::percent_agreement(g), 1e-15) << trial;
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST(Agreement, PercentAgreementBounded) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = oracle::random_grid(rng, 6, 3, 2, 0.2, 2);
    double p = percent_agreement(oracle::to_matrix(g, 2));
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, 1.0);
  }
}

TEST(Agreement, AlphaInvariantToLabelRenaming) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = oracle::random_grid(rng, 5, 4, 3, 0.2, 2);
    auto renamed = g;
    for (auto& row : renamed) {
      for (auto& cell : row) {
        if (cell) cell = (*cell + 1) % 3;
      }
    }
    auto a = krippendorff_alpha(oracle::to_matrix(g, 3));
    auto b = krippendorff_alpha(oracle::to_matrix(renamed, 3));
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) ASSERT_NEAR(*a, *b, 1e-12);
    ASSERT_NEAR(*gwet_ac1(oracle::to_matrix(g, 3)), *gwet_ac1(oracle::to_matrix(renamed, 3)), 1e-12);
  }
}

}  // namespace
}  // namespace claimeval
