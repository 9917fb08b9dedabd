#include <random>
#include <set>
#include <string>

#include <benchmark/benchmark.h>
#include <fmt/format.h>

#include "claimeval/backends.h"
#include "claimeval/harness.h"
#include "claimeval/set_metrics.h"
#include "claimeval/text.h"
#include "claimeval/validation_stats.h"

namespace {

using namespace claimeval;

std::string sentence(std::mt19937_64& rng, int n) {
  static const char* kWords[] = {"the", "river", "flows", "through", "vienna", "capital", "prize", "won",
                                 "physicist", "born", "warsaw", "language", "designed", "by", "guido", "in"};
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? " " : "") + std::string(kWords[rng() % std::size(kWords)]);
  return s + ".";
}

ClaimSet claim_set(std::mt19937_64& rng, const std::string& doc, const std::string& origin, int n) {
  ClaimSet s{doc, origin, {}};
  for (int i = 0; i < n; ++i) s.claims.push_back({fmt::format("{}-{}-{}", origin, doc, i), doc, sentence(rng, 8), origin});
  return s;
}

void BM_Levenshtein(benchmark::State& state) {
  std::mt19937_64 rng(1);
  auto a = text::utf8_decode(sentence(rng, static_cast<int>(state.range(0))));
  auto b = text::utf8_decode(sentence(rng, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(text::levenshtein(a, b));
}
BENCHMARK(BM_Levenshtein)->Arg(8)->Arg(32)->Arg(128);

AnnotationMatrix random_matrix(int items) {
  std::mt19937_64 rng(2);
  AnnotationMatrix m({0, 1, 2, 3});
  for (int i = 0; i < items; ++i) {
    for (int a = 0; a < 3; ++a) m.add(fmt::format("i{}", i), fmt::format("a{}", a), static_cast<int>(rng() % 4));
  }
  return m;
}

void BM_KrippendorffAlpha(benchmark::State& state) {
  auto m = random_matrix(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(krippendorff_alpha(m));
}
BENCHMARK(BM_KrippendorffAlpha)->Arg(100)->Arg(1000);

void BM_GwetAC1(benchmark::State& state) {
  auto m = random_matrix(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gwet_ac1(m));
}
BENCHMARK(BM_GwetAC1)->Arg(100)->Arg(1000);

void BM_ScoreSet(benchmark::State& state) {
  std::mt19937_64 rng(3);
  auto n = static_cast<int>(state.range(0));
  auto gold = claim_set(rng, "d", "gold", n);
  auto pred = claim_set(rng, "d", "m", n);
  mock::Alignment aligner;
  for (auto _ : state) benchmark::DoNotOptimize(score_set(gold, pred, aligner));
}
BENCHMARK(BM_ScoreSet)->Arg(4)->Arg(16);

void BM_Evaluate(benchmark::State& state) {
  std::mt19937_64 rng(4);
  Corpus corpus;
  for (int d = 0; d < state.range(0); ++d) {
    auto id = fmt::format("doc{}", d);
    corpus.documents.push_back({id, fmt::format("Title {}", d % 20), sentence(rng, 10), sentence(rng, 14), sentence(rng, 10)});
    corpus.claim_sets.push_back(claim_set(rng, id, "gold", 4));
    corpus.claim_sets.push_back(claim_set(rng, id, "model", 5));
  }
  auto backends = BackendSet::mocks();
  RunConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(corpus, backends, config));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
