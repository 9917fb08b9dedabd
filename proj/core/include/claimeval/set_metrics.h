#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "claimeval/backends.h"
#include "claimeval/types.h"

namespace claimeval {

/// Reference-based scores of one predicted claim set against its gold set.
struct SetScores {
  std::string doc_id;
  std::string origin;
  double focus = 0.0;
  double coverage = 0.0;
  double f_fact = 0.0;
  std::optional<double> redundancy;  // absent when fewer than two claims
  std::map<std::string, double> claimwise_focus;     // predicted claim_id -> score
  std::map<std::string, double> claimwise_coverage;  // gold claim_id -> score
};

/// Claim texts in order, each ending in sentence punctuation ('.' appended
/// when missing), joined with single spaces. Throws UndefinedMetricError for
/// an empty list.
std::string concat_claims(std::span<const Claim> claims);
std::string concat_claims(const ClaimSet& set);

/// Mean over predicted claims c of aligner(concat(gold), c).
double focus(const ClaimSet& gold, const ClaimSet& predicted, const AlignmentScorer& aligner);

/// focus with the roles swapped: mean over gold claims g of
/// aligner(concat(predicted), g).
double coverage(const ClaimSet& gold, const ClaimSet& predicted, const AlignmentScorer& aligner);

/// Mean over c of aligner(concat(predicted \ c), c); nullopt for |C| < 2.
std::optional<double> redundancy(const ClaimSet& predicted, const AlignmentScorer& aligner);

/// Harmonic mean; 0 when both are 0. Throws DataError outside [0,1].
double f_fact(double focus, double coverage);

double claimwise_focus(const ClaimSet& gold, const Claim& claim, const AlignmentScorer& aligner);
double claimwise_coverage(const Claim& gold_claim, const ClaimSet& predicted,
                          const AlignmentScorer& aligner);

/// Focus, coverage, F_fact and redundancy with claimwise breakdowns.
/// `coverage_premise` replaces `predicted` as the concatenated premise for
/// coverage when given (used to drop claims that failed decontextualization).
SetScores score_set(const ClaimSet& gold, const ClaimSet& predicted, const AlignmentScorer& aligner,
                    const ClaimSet* coverage_premise = nullptr);

}  // namespace claimeval
