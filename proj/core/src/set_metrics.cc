#include "claimeval/set_metrics.h"

#include <fmt/format.h>

#include "claimeval/errors.h"
#include "claimeval/text.h"

namespace claimeval {
namespace {

// Mean of aligner(concat(reference), c) over candidates, summed in order.
// Shared by focus and coverage so that the role swap is exact.
double mean_alignment(const ClaimSet& reference, const ClaimSet& candidates,
                      const AlignmentScorer& aligner) {
  if (reference.empty()) {
    throw UndefinedMetricError(fmt::format("document '{}': empty reference set for origin '{}'",
                                           reference.doc_id, reference.origin));
  }
  if (candidates.empty()) {
    throw UndefinedMetricError(fmt::format("document '{}': empty claim set for origin '{}'",
                                           candidates.doc_id, candidates.origin));
  }
  auto premise = concat_claims(reference);
  double sum = 0.0;
  for (const auto& c : candidates.claims) sum += aligner.score(premise, c.text);
  return sum / static_cast<double>(candidates.size());
}

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) throw DataError(fmt::format("{} = {} is outside [0, 1]", name, x));
}

}  // namespace

std::string concat_claims(std::span<const Claim> claims) {
  if (claims.empty()) throw UndefinedMetricError("cannot concatenate an empty claim set");
  std::string out;
  for (const auto& c : claims) {
    auto t = text::trim(c.text);
    if (!out.empty()) out += ' ';
    out += t;
    if (!text::ends_with_sentence_punctuation(t)) out += '.';
  }
  return out;
}

std::string concat_claims(const ClaimSet& set) { return concat_claims(set.claims); }

double focus(const ClaimSet& gold, const ClaimSet& predicted, const AlignmentScorer& aligner) {
  return mean_alignment(gold, predicted, aligner);
}

double coverage(const ClaimSet& gold, const ClaimSet& predicted, const AlignmentScorer& aligner) {
  return focus(predicted, gold, aligner);
}

std::optional<double> redundancy(const ClaimSet& predicted, const AlignmentScorer& aligner) {
  const auto n = predicted.size();
  if (n < 2) return std::nullopt;
  std::vector<Claim> others;
  others.reserve(n - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(predicted.claims[j]);
    }
    sum += aligner.score(concat_claims(others), predicted.claims[i].text);
  }
  return sum / static_cast<double>(n);
}

double f_fact(double focus, double coverage) {
  check_unit(focus, "focus");
  check_unit(coverage, "coverage");
  if (focus + coverage == 0.0) return 0.0;
  return 2.0 * focus * coverage / (focus + coverage);
}

double claimwise_focus(const ClaimSet& gold, const Claim& claim, const AlignmentScorer& aligner) {
  return aligner.score(concat_claims(gold), claim.text);
}

double claimwise_coverage(const Claim& gold_claim, const ClaimSet& predicted,
                          const AlignmentScorer& aligner) {
  return aligner.score(concat_claims(predicted), gold_claim.text);
}

SetScores score_set(const ClaimSet& gold, const ClaimSet& predicted, const AlignmentScorer& aligner,
                    const ClaimSet* coverage_premise) {
  SetScores s;
  s.doc_id = predicted.doc_id;
  s.origin = predicted.origin;
  if (gold.empty()) {
    throw UndefinedMetricError(fmt::format("document '{}' has no gold claims", gold.doc_id));
  }
  if (predicted.empty()) {
    throw UndefinedMetricError(fmt::format("document '{}': origin '{}' predicted no claims",
                                           predicted.doc_id, predicted.origin));
  }

  const auto gold_premise = concat_claims(gold);
  double focus_sum = 0.0;
  for (const auto& c : predicted.claims) {
    double v = aligner.score(gold_premise, c.text);
    s.claimwise_focus[c.claim_id] = v;
    focus_sum += v;
  }
  s.focus = focus_sum / static_cast<double>(predicted.size());

  const ClaimSet& premise_set = coverage_premise != nullptr ? *coverage_premise : predicted;
  double coverage_sum = 0.0;
  if (!premise_set.empty()) {
    const auto pred_premise = concat_claims(premise_set);
    for (const auto& g : gold.claims) {
      double v = aligner.score(pred_premise, g.text);
      s.claimwise_coverage[g.claim_id] = v;
      coverage_sum += v;
    }
  } else {
    // Every predicted claim was filtered out: nothing is covered.
    for (const auto& g : gold.claims) s.claimwise_coverage[g.claim_id] = 0.0;
  }
  s.coverage = coverage_sum / static_cast<double>(gold.size());
  s.f_fact = f_fact(s.focus, s.coverage);
  s.redundancy = redundancy(predicted, aligner);
  return s;
}

}  // namespace claimeval
